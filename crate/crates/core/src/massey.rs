//! Triple and higher Massey products, a-Massey products, and the formality verdict.
//!
//! Products are sets; each result carries one distinguished representative (built from
//! canonical primitives) together with what is known about the rest of the set.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{Cdga, Degree, Element};
use crate::cohomology::{CohomologyError, CohomologyRing};
use crate::linalg::{LinAlgError, Matrix, Subspace, Vector};
use crate::ring::CohClass;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MasseyError {
    #[error("element is not exact in the complex")]
    NotExact,
    #[error("element is not closed")]
    NotClosed,
    #[error("product is not defined: {0}")]
    NotDefined(String),
    #[error("the class a has odd degree {0}")]
    OddDegreeA(u32),
    #[error("invalid defining system: {0}")]
    InvalidDefiningSystem(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("at least {0} classes are required")]
    TooFewClasses(usize),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    TrivialCertified,
    NontrivialCertified,
    Unknown,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::TrivialCertified => "TRIVIAL_CERTIFIED",
            Status::NontrivialCertified => "NONTRIVIAL_CERTIFIED",
            Status::Unknown => "UNKNOWN",
        }
    }
}

/// `bar(x) = (-1)^{|x|} x`.
pub fn bar(alg: &Cdga, x: &Element) -> Element {
    match alg.degree(x) {
        Degree::Homogeneous(k) if k % 2 == 1 => -x,
        Degree::Mixed => panic!("bar of an inhomogeneous element"),
        _ => x.clone(),
    }
}

fn homogeneous_degree(alg: &Cdga, x: &Element, fallback: u32) -> Result<u32, MasseyError> {
    match alg.degree(x) {
        Degree::Zero => Ok(fallback),
        Degree::Homogeneous(k) => Ok(k),
        Degree::Mixed => Err(MasseyError::DegreeMismatch("inhomogeneous element".into())),
    }
}

/// Canonical primitive of an exact form of degree `k`: `d xi = x`, with `xi` in the
/// complex the ring was built from.
pub fn solve_primitive(ring: &CohomologyRing, x: &Element, k: u32) -> Result<Element, MasseyError> {
    let alg = ring.algebra();
    alg.expect_degree(x, k).map_err(CohomologyError::from)?;
    if !alg.d(x).is_zero() {
        return Err(MasseyError::NotClosed);
    }
    ring.primitive(x, k)?.ok_or(MasseyError::NotExact)
}

/// A Massey-type product: a representative and the known part of the set around it.
#[derive(Clone, Debug)]
pub struct MasseyCoset {
    /// `false` only when the chosen strategy could not build a defining system.
    pub defined: bool,
    pub degree: u32,
    pub representative_element: Element,
    pub representative: CohClass,
    /// Exact indeterminacy (the set is `representative + indeterminacy`), if known.
    pub indeterminacy: Option<Subspace>,
    pub status: Status,
    /// The defining system used, keyed by `(i, j)` with 1-based indices.
    pub system: BTreeMap<(usize, usize), Element>,
}

/// Products landing above the top degree vanish for degree reasons; they are rejected
/// rather than reported.
fn check_top(ring: &CohomologyRing, degree: u32) -> Result<(), MasseyError> {
    if degree > ring.top() {
        return Err(MasseyError::DegreeMismatch(format!("the product lands in degree {degree}, above the top degree {}", ring.top())));
    }
    Ok(())
}

fn closed_class(ring: &CohomologyRing, x: &Element, k: u32) -> Result<CohClass, MasseyError> {
    ring.class_of(x, k).map_err(|e| match e {
        CohomologyError::NotCocycle => MasseyError::NotClosed,
        other => other.into(),
    })
}

/// `<a1, a2, a3>` with representative `a1 a23 + (-1)^{|a1|+1} a12 a3`, where
/// `d a12 = a1 a2` and `d a23 = a2 a3`.
pub fn triple_massey(ring: &CohomologyRing, a1: &CohClass, a2: &CohClass, a3: &CohClass) -> Result<MasseyCoset, MasseyError> {
    let g = ring.ring();
    let (p, q, r) = (a1.degree, a2.degree, a3.degree);
    check_top(ring, p + q + r - 1)?;
    if !g.mul(a1, a2).is_zero() {
        return Err(MasseyError::NotDefined("a1 * a2 is not zero".into()));
    }
    if !g.mul(a2, a3).is_zero() {
        return Err(MasseyError::NotDefined("a2 * a3 is not zero".into()));
    }
    let x1 = ring.representative(a1);
    let x2 = ring.representative(a2);
    let x3 = ring.representative(a3);
    let a12 = solve_primitive(ring, &x1.wedge(&x2), p + q)?;
    let a23 = solve_primitive(ring, &x2.wedge(&x3), q + r)?;
    let rep = triple_from_primitives(&x1, &x3, &a12, &a23, p);
    let degree = p + q + r - 1;
    let class = closed_class(ring, &rep, degree)?;
    let indeterminacy = triple_indeterminacy(ring, a1, a3, p + q - 1, q + r - 1);
    let status = status_for(&class, &indeterminacy);
    let mut system = BTreeMap::new();
    system.insert((1, 1), x1);
    system.insert((2, 2), x2);
    system.insert((3, 3), x3);
    system.insert((1, 2), a12);
    system.insert((2, 3), a23);
    Ok(MasseyCoset {
        defined: true,
        degree,
        representative_element: rep,
        representative: class,
        indeterminacy: Some(indeterminacy),
        status,
        system,
    })
}

/// The triple representative for explicitly chosen primitives.
pub fn triple_from_primitives(x1: &Element, x3: &Element, a12: &Element, a23: &Element, deg_a1: u32) -> Element {
    let first = x1.wedge(a23);
    let second = a12.wedge(x3);
    if deg_a1 % 2 == 0 {
        &first - &second
    } else {
        &first + &second
    }
}

/// `[a1] * H^{|a2|+|a3|-1} + H^{|a1|+|a2|-1} * [a3]`.
pub fn triple_indeterminacy(ring: &CohomologyRing, a1: &CohClass, a3: &CohClass, left_deg: u32, right_deg: u32) -> Subspace {
    let g = ring.ring();
    let target = a1.degree + right_deg;
    let mut classes = Vec::new();
    for i in 0..g.dim(right_deg) {
        classes.push(g.mul(a1, &g.basis_class(right_deg, i)));
    }
    for i in 0..g.dim(left_deg) {
        classes.push(g.mul(&g.basis_class(left_deg, i), a3));
    }
    g.span(target, &classes)
}

fn status_for(class: &CohClass, indeterminacy: &Subspace) -> Status {
    if class.is_zero() || indeterminacy.contains(&class.coords).expect("same degree") {
        Status::TrivialCertified
    } else {
        Status::NontrivialCertified
    }
}

/// How to find the elements `a_{i,j}` of a defining system.
#[derive(Clone, Debug)]
pub enum Strategy {
    /// Canonical primitives, stage by stage.
    Greedy,
    /// A user-supplied system, keyed by 1-based `(i, j)`; entries `(i, i)` are optional
    /// and default to the ring representatives.
    Supplied(BTreeMap<(usize, usize), Element>),
}

fn element_degree(degs: &[u32], i: usize, j: usize) -> u32 {
    // |a_{i,j}| = sum of |a_l| for l in i..=j, minus (j - i)
    degs[i - 1..j].iter().sum::<u32>() - (j - i) as u32
}

fn system_rhs(alg: &Cdga, sys: &BTreeMap<(usize, usize), Element>, i: usize, j: usize) -> Element {
    let mut acc = alg.zero();
    for k in i..j {
        acc = &acc + &bar(alg, &sys[&(i, k)]).wedge(&sys[&(k + 1, j)]);
    }
    acc
}

/// `<a_1, ..., a_n>` via a defining system with `d a_{i,j} = sum_k bar(a_{i,k}) a_{k+1,j}`
/// and representative `sum_k bar(a_{1,k}) a_{k+1,n}`.
///
/// For `n = 3` the indeterminacy is exact. For larger `n` it is only reported when
/// `variation` is supplied by the caller, in which case nontriviality is certified
/// against that span.
pub fn higher_massey(
    ring: &CohomologyRing,
    classes: &[CohClass],
    strategy: &Strategy,
    variation: Option<&Subspace>,
) -> Result<MasseyCoset, MasseyError> {
    let n = classes.len();
    if n < 3 {
        return Err(MasseyError::TooFewClasses(3));
    }
    let alg = ring.algebra();
    let degs: Vec<u32> = classes.iter().map(|c| c.degree).collect();
    let degree = element_degree(&degs, 1, n) + 1;
    check_top(ring, degree)?;
    let mut sys: BTreeMap<(usize, usize), Element> = BTreeMap::new();
    for (i, c) in classes.iter().enumerate() {
        sys.insert((i + 1, i + 1), ring.representative(c));
    }
    match strategy {
        Strategy::Supplied(given) => {
            for (&(i, j), x) in given {
                if i < 1 || j > n || i > j || (i, j) == (1, n) {
                    return Err(MasseyError::InvalidDefiningSystem(format!("unexpected entry a_{{{i},{j}}}")));
                }
                if alg.expect_degree(x, element_degree(&degs, i, j)).is_err() {
                    return Err(MasseyError::InvalidDefiningSystem(format!("a_{{{i},{j}}} has the wrong degree")));
                }
                sys.insert((i, j), x.clone());
            }
            for (i, c) in classes.iter().enumerate() {
                let x = &sys[&(i + 1, i + 1)];
                match ring.class_of(x, c.degree) {
                    Ok(k) if &k == c => {}
                    _ => {
                        return Err(MasseyError::InvalidDefiningSystem(format!(
                            "a_{{{0},{0}}} does not represent the given class",
                            i + 1
                        )))
                    }
                }
            }
            for len in 2..n {
                for i in 1..=n + 1 - len {
                    let j = i + len - 1;
                    let Some(x) = sys.get(&(i, j)) else {
                        return Err(MasseyError::InvalidDefiningSystem(format!("missing a_{{{i},{j}}}")));
                    };
                    if alg.d(x) != system_rhs(alg, &sys, i, j) {
                        return Err(MasseyError::InvalidDefiningSystem(format!("equation for a_{{{i},{j}}} fails")));
                    }
                }
            }
        }
        Strategy::Greedy => {
            for len in 2..n {
                for i in 1..=n + 1 - len {
                    let j = i + len - 1;
                    let rhs = system_rhs(alg, &sys, i, j);
                    let k = element_degree(&degs, i, j) + 1;
                    match ring.primitive(&rhs, k)? {
                        Some(x) => {
                            sys.insert((i, j), x);
                        }
                        None => {
                            return Ok(MasseyCoset {
                                defined: false,
                                degree,
                                representative_element: alg.zero(),
                                representative: ring.ring().zero(degree),
                                indeterminacy: None,
                                status: Status::Unknown,
                                system: sys,
                            });
                        }
                    }
                }
            }
        }
    }
    let rep = system_rhs(alg, &sys, 1, n);
    let class = closed_class(ring, &rep, degree)?;
    let indeterminacy = if n == 3 {
        Some(triple_indeterminacy(ring, &classes[0], &classes[2], degs[0] + degs[1] - 1, degs[1] + degs[2] - 1))
    } else {
        variation.cloned()
    };
    let status = if class.is_zero() {
        Status::TrivialCertified
    } else {
        match &indeterminacy {
            Some(s) if n == 3 => status_for(&class, s),
            Some(s) if !s.contains(&class.coords).map_err(|e: LinAlgError| MasseyError::DegreeMismatch(e.to_string()))? => {
                Status::NontrivialCertified
            }
            _ => Status::Unknown,
        }
    };
    Ok(MasseyCoset { defined: true, degree, representative_element: rep, representative: class, indeterminacy, status, system: sys })
}

/// Result of an a-Massey product `<a; b_1, ..., b_n>`.
#[derive(Clone, Debug)]
pub struct AMasseyResult {
    pub defined: bool,
    pub degree: u32,
    pub a: CohClass,
    pub bs: Vec<CohClass>,
    pub a_element: Element,
    pub b_elements: Vec<Element>,
    /// `d xi_i = a * b_i`.
    pub primitives: Vec<Element>,
    pub representative_element: Element,
    pub representative: CohClass,
    /// Linear span containing every variation of the representative.
    pub bound: Subspace,
    pub certificate: Status,
    /// Modified primitives realizing the zero class, when triviality was certified.
    pub witness: Option<Vec<Element>>,
}

/// `c = sum_i bar(xi_1) ... bar(xi_{i-1}) b_i xi_{i+1} ... xi_n`.
pub fn a_massey_element(alg: &Cdga, bs: &[Element], xis: &[Element]) -> Element {
    let n = bs.len();
    let mut acc = alg.zero();
    for i in 0..n {
        let mut term = alg.one();
        for (l, xi) in xis.iter().enumerate().take(n) {
            let factor = match l.cmp(&i) {
                std::cmp::Ordering::Less => bar(alg, xi),
                std::cmp::Ordering::Equal => bs[i].clone(),
                std::cmp::Ordering::Greater => xi.clone(),
            };
            term = term.wedge(&factor);
            if term.is_zero() {
                break;
            }
        }
        acc = &acc + &term;
    }
    acc
}

fn check_a_inputs(ring: &CohomologyRing, a: &CohClass, bs: &[CohClass]) -> Result<(), MasseyError> {
    if a.degree % 2 == 1 {
        return Err(MasseyError::OddDegreeA(a.degree));
    }
    if bs.is_empty() {
        return Err(MasseyError::TooFewClasses(1));
    }
    for (i, b) in bs.iter().enumerate() {
        if !ring.cup(a, b).is_zero() {
            return Err(MasseyError::NotDefined(format!("a * b_{} is not zero", i + 1)));
        }
    }
    Ok(())
}

fn a_degree(a: &CohClass, bs: &[CohClass]) -> u32 {
    let n = bs.len() as u32;
    bs.iter().map(|b| b.degree).sum::<u32>() + (n - 1) * (a.degree - 1)
}

/// Representative class and bound, recursively over sub-products.
fn a_bound(ring: &CohomologyRing, a: &CohClass, bs: &[CohClass]) -> Result<(CohClass, Subspace), MasseyError> {
    let alg = ring.algebra();
    let g = ring.ring();
    let degree = a_degree(a, bs);
    let xa = ring.representative(a);
    let b_el: Vec<Element> = bs.iter().map(|b| ring.representative(b)).collect();
    let xis = b_el
        .iter()
        .zip(bs)
        .map(|(b, bc)| solve_primitive(ring, &xa.wedge(b), a.degree + bc.degree))
        .collect::<Result<Vec<_>, _>>()?;
    let c = a_massey_element(alg, &b_el, &xis);
    let class = closed_class(ring, &c, degree)?;
    if bs.len() == 1 {
        return Ok((class, Subspace::zero(g.field(), g.dim(degree))));
    }
    let mut bound = Subspace::zero(g.field(), g.dim(degree));
    for j in 0..bs.len() {
        let mut rest = bs.to_vec();
        rest.remove(j);
        let (rep_j, bound_j) = a_bound(ring, a, &rest)?;
        let span_j = bound_j.sum(&g.span(rep_j.degree, &[rep_j.clone()])).expect("same degree");
        let xi_deg = a.degree + bs[j].degree - 1;
        let mut classes = Vec::new();
        for r in span_j.basis() {
            let rc = CohClass::new(rep_j.degree, r.clone());
            for h in 0..g.dim(xi_deg) {
                classes.push(g.mul(&rc, &g.basis_class(xi_deg, h)));
            }
        }
        bound = bound.sum(&g.span(degree, &classes)).expect("same degree");
    }
    Ok((class, bound))
}

/// `<a; b_1, ..., b_n>` with canonical primitives, the recursive bound and a certificate.
pub fn a_massey(ring: &CohomologyRing, a: &CohClass, bs: &[CohClass]) -> Result<AMasseyResult, MasseyError> {
    check_a_inputs(ring, a, bs)?;
    let alg = ring.algebra();
    let degree = a_degree(a, bs);
    check_top(ring, degree)?;
    let xa = ring.representative(a);
    let b_el: Vec<Element> = bs.iter().map(|b| ring.representative(b)).collect();
    let xis = b_el
        .iter()
        .zip(bs)
        .map(|(b, bc)| solve_primitive(ring, &xa.wedge(b), a.degree + bc.degree))
        .collect::<Result<Vec<_>, _>>()?;
    let c = a_massey_element(alg, &b_el, &xis);
    let class = closed_class(ring, &c, degree)?;
    let (_, bound) = a_bound(ring, a, bs)?;
    let mut witness = None;
    let certificate = if class.is_zero() {
        Status::TrivialCertified
    } else if !bound.contains(&class.coords).expect("same degree") {
        Status::NontrivialCertified
    } else {
        witness = linear_witness(ring, a, &b_el, &xis, &class, degree)?;
        if witness.is_some() {
            Status::TrivialCertified
        } else {
            Status::Unknown
        }
    };
    Ok(AMasseyResult {
        defined: true,
        degree,
        a: a.clone(),
        bs: bs.to_vec(),
        a_element: xa,
        b_elements: b_el,
        primitives: xis,
        representative_element: c,
        representative: class,
        bound,
        certificate,
        witness,
    })
}

/// Looks for closed `eta_j` making the class vanish, ignoring cross terms between
/// different `eta`s, then checks the candidate exactly.
fn linear_witness(
    ring: &CohomologyRing,
    a: &CohClass,
    b_el: &[Element],
    xis: &[Element],
    class: &CohClass,
    degree: u32,
) -> Result<Option<Vec<Element>>, MasseyError> {
    let alg = ring.algebra();
    let g = ring.ring();
    let field = g.field();
    let mut cols: Vec<Vector> = Vec::new();
    let mut params: Vec<(usize, Element)> = Vec::new();
    for j in 0..xis.len() {
        let xi_deg = homogeneous_degree(alg, &xis[j], a.degree + alg_degree(alg, &b_el[j]) - 1)?;
        for h in 0..g.dim(xi_deg) {
            let eta = ring.basis_representative(xi_deg, h);
            // c is affine in each single xi_j, so this is exactly c(xi_j + eta) - c
            let lin = linear_part(alg, b_el, xis, j, &eta);
            cols.push(closed_class(ring, &lin, degree)?.coords);
            params.push((j, eta));
        }
    }
    let m = Matrix::from_columns(field, g.dim(degree), &cols).expect("class coordinates");
    let target: Vector = class.coords.iter().map(|x| -x).collect();
    let Ok(t) = m.solve(&target) else {
        return Ok(None);
    };
    let mut varied = xis.to_vec();
    for (coef, (j, eta)) in t.iter().zip(&params) {
        varied[*j] = &varied[*j] + &eta.scale(coef);
    }
    let c2 = a_massey_element(alg, b_el, &varied);
    if closed_class(ring, &c2, degree)?.is_zero() {
        Ok(Some(varied))
    } else {
        Ok(None)
    }
}

fn alg_degree(alg: &Cdga, x: &Element) -> u32 {
    match alg.degree(x) {
        Degree::Homogeneous(k) => k,
        _ => 0,
    }
}

/// `c(xi_j + eta) - c(xi_j)`, which is linear in `eta`.
fn linear_part(alg: &Cdga, b_el: &[Element], xis: &[Element], j: usize, eta: &Element) -> Element {
    let mut with_eta = xis.to_vec();
    with_eta[j] = eta.clone();
    let mut with_zero = xis.to_vec();
    with_zero[j] = alg.zero();
    &a_massey_element(alg, b_el, &with_eta) - &a_massey_element(alg, b_el, &with_zero)
}

/// Outcome of replacing `xi_j` by `xi_j + eta`.
#[derive(Clone, Debug)]
pub struct Variation {
    pub varied: Element,
    pub difference: Element,
    /// The closed-form prediction for the difference.
    pub predicted: Element,
    pub identity_holds: bool,
}

/// Recomputes the representative with `xi_j + eta` (1-based `j`) and compares the
/// difference with `(-1)^{(|b_j|+1)(n-j+sum_{i>j}|b_i|)} (sum_{i != j} P_i) * eta`, where
/// `P_i` is the product of `bar(xi_1) .. b_i .. xi_n` with slot `j` left out.
pub fn a_massey_variation(ring: &CohomologyRing, result: &AMasseyResult, j: usize, eta: &Element) -> Result<Variation, MasseyError> {
    let alg = ring.algebra();
    let n = result.bs.len();
    if j == 0 || j > n {
        return Err(MasseyError::DegreeMismatch(format!("index {j} out of range")));
    }
    let xi_deg = result.a.degree + result.bs[j - 1].degree - 1;
    alg.expect_degree(eta, xi_deg)
        .map_err(|_| MasseyError::DegreeMismatch(format!("eta must have degree {xi_deg}")))?;
    let mut xis = result.primitives.clone();
    xis[j - 1] = &xis[j - 1] + eta;
    let varied = a_massey_element(alg, &result.b_elements, &xis);
    let difference = &varied - &result.representative_element;

    let mut sum = alg.zero();
    for i in 0..n {
        if i == j - 1 {
            continue;
        }
        let mut term = alg.one();
        for l in 0..n {
            if l == j - 1 {
                continue;
            }
            let factor = match l.cmp(&i) {
                std::cmp::Ordering::Less => bar(alg, &result.primitives[l]),
                std::cmp::Ordering::Equal => result.b_elements[i].clone(),
                std::cmp::Ordering::Greater => result.primitives[l].clone(),
            };
            term = term.wedge(&factor);
        }
        sum = &sum + &term;
    }
    let tail: u32 = result.bs[j..].iter().map(|b| b.degree).sum();
    let exponent = (result.bs[j - 1].degree + 1) * ((n - j) as u32 + tail);
    let mut predicted = sum.wedge(eta);
    if exponent % 2 == 1 {
        predicted = -predicted;
    }
    let identity_holds = predicted == difference;
    Ok(Variation { varied, difference, predicted, identity_holds })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    NotFormal,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::NotFormal => "NOT_FORMAL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

/// One certified nontrivial product rules out formality; nothing certifies it.
pub fn formality_verdict(statuses: &[Status]) -> Verdict {
    if statuses.contains(&Status::NontrivialCertified) {
        Verdict::NotFormal
    } else {
        Verdict::Inconclusive
    }
}
