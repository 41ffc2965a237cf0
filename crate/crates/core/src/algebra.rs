//! Free graded-commutative algebras on odd-degree generators, with a differential.
//!
//! Every generator has odd degree, so a monomial is a set of generator indices and
//! the sign of a product only depends on how many transpositions sorting takes.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_traits::Signed;
use thiserror::Error;

use crate::linalg::{LinAlgError, Matrix, Vector};
use crate::scalars::{FieldRef, Scalar};

pub const MAX_GENERATORS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("elements belong to different algebras")]
    MixedAlgebras,
    #[error("generator `{0}` has even degree {1}; only odd degrees are supported")]
    EvenDegree(String, u32),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("too many generators ({0}); at most {MAX_GENERATORS} are supported")]
    TooManyGenerators(usize),
    #[error("d({generator}) must be homogeneous of degree {expected}")]
    BadDifferentialDegree { generator: String, expected: u32 },
    #[error("d^2({0}) is nonzero")]
    DSquaredNonzero(String),
    #[error("bracket data violates the Jacobi identity: d^2(e{0}) is nonzero")]
    JacobiFailure(usize),
    #[error("bracket index out of range: {0}")]
    BadBracket(String),
    #[error("substitution is not invertible")]
    NotInvertible,
    #[error("expected a homogeneous element of degree {expected}")]
    DegreeMismatch { expected: u32 },
    #[error("expected {expected} generator images, found {found}")]
    WrongImageCount { expected: usize, found: usize },
    #[error("substitution does not commute with the differential on `{0}`")]
    NotChainMap(String),
}

/// A square-free monomial, stored as a bitmask over generator indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_bits(bits: u64) -> Self {
        Monomial(bits)
    }

    pub fn generator(i: usize) -> Self {
        Monomial(1 << i)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_one(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |i| bits >> i & 1 == 1)
    }

    pub fn without(self, i: usize) -> Self {
        Monomial(self.0 & !(1 << i))
    }

    /// Product `self * other` as a sign and a monomial, or `None` if they share a factor.
    pub fn mul(self, other: Monomial) -> Option<(bool, Monomial)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // each generator of `other` passes over the generators of `self` above it
        let mut swaps = 0;
        for j in other.indices() {
            swaps += (self.0 >> j >> 1).count_ones();
        }
        Some((swaps % 2 == 1, Monomial(self.0 | other.0)))
    }

    /// Builds a monomial from an unsorted index list; returns the sorting sign, or
    /// `None` on a repeated index.
    pub fn from_indices(indices: &[usize]) -> Option<(bool, Monomial)> {
        let mut acc = Monomial::ONE;
        let mut negative = false;
        for &i in indices {
            let (neg, m) = acc.mul(Monomial::generator(i))?;
            negative ^= neg;
            acc = m;
        }
        Some((negative, acc))
    }
}

impl Ord for Monomial {
    /// Lexicographic on the increasing index lists.
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.indices();
        let mut b = other.indices();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) if x != y => return x.cmp(&y),
                _ => {}
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.indices().map(|i| i.to_string()).collect();
        write!(f, "m[{}]", idx.join(","))
    }
}

static NEXT_ALGEBRA_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_ALGEBRA_ID.fetch_add(1, AtomicOrdering::Relaxed)
}

/// A sparse linear combination of monomials of one algebra.
#[derive(Clone, PartialEq, Eq)]
pub struct Element {
    alg: u64,
    field: FieldRef,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Element {
    pub fn algebra_id(&self) -> u64 {
        self.alg
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: Monomial) -> Scalar {
        self.terms.get(&m).cloned().unwrap_or_else(|| Scalar::zero(&self.field))
    }

    fn empty_like(&self) -> Element {
        Element { alg: self.alg, field: self.field.clone(), terms: BTreeMap::new() }
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x += &c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn same_algebra(&self, other: &Element) -> Result<(), AlgebraError> {
        if self.alg != other.alg {
            return Err(AlgebraError::MixedAlgebras);
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.same_algebra(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.try_add(&-other)
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        let mut out = self.empty_like();
        if c.is_zero() {
            return out;
        }
        for (m, x) in &self.terms {
            out.terms.insert(*m, x * c);
        }
        out
    }

    /// Graded-commutative product.
    pub fn try_wedge(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.same_algebra(other)?;
        let mut out = self.empty_like();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((neg, m)) = m1.mul(*m2) {
                    let c = c1 * c2;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Panics on mixed algebras; use [`Element::try_wedge`] to get an error instead.
    pub fn wedge(&self, other: &Element) -> Element {
        self.try_wedge(other).expect("wedge of elements from different algebras")
    }

    /// Keeps only the terms whose monomial satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(Monomial) -> bool) -> Element {
        let mut out = self.empty_like();
        for (m, c) in &self.terms {
            if keep(*m) {
                out.terms.insert(*m, c.clone());
            }
        }
        out
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.try_add(rhs).expect("sum of elements from different algebras")
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self.try_sub(rhs).expect("difference of elements from different algebras")
    }
}

impl Add for Element {
    type Output = Element;
    fn add(self, rhs: Element) -> Element {
        &self + &rhs
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        -&self
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element(")?;
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c}){m:?}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    /// Character weight for diagonal cyclic actions.
    pub weight: Option<i64>,
    /// Name of the complex-conjugate generator, if any.
    pub conjugate: Option<String>,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Generator { name: name.into(), degree, weight: None, conjugate: None }
    }

    pub fn with_weight(mut self, w: i64) -> Self {
        self.weight = Some(w);
        self
    }

    pub fn with_conjugate(mut self, name: impl Into<String>) -> Self {
        self.conjugate = Some(name.into());
        self
    }
}

/// Homogeneity of an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    Zero,
    Homogeneous(u32),
    Mixed,
}

/// A free graded-commutative algebra with a validated differential.
#[derive(Clone)]
pub struct Cdga {
    id: u64,
    field: FieldRef,
    generators: Vec<Generator>,
    conjugates: Vec<usize>,
    differential: Vec<Element>,
}

impl fmt::Debug for Cdga {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Cdga#{} {{", self.id)?;
        for (g, d) in self.generators.iter().zip(&self.differential) {
            writeln!(f, "  d {} = {}", g.name, self.render(d))?;
        }
        write!(f, "}}")
    }
}

impl Cdga {
    /// The free algebra on `generators` with zero differential.
    pub fn free(field: &FieldRef, generators: Vec<Generator>) -> Result<Cdga, AlgebraError> {
        if generators.len() > MAX_GENERATORS {
            return Err(AlgebraError::TooManyGenerators(generators.len()));
        }
        let mut seen = BTreeSet::new();
        for g in &generators {
            if g.degree % 2 == 0 {
                return Err(AlgebraError::EvenDegree(g.name.clone(), g.degree));
            }
            if !seen.insert(g.name.clone()) {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
        }
        let mut conjugates = Vec::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            let j = match &g.conjugate {
                None => i,
                Some(name) => generators
                    .iter()
                    .position(|h| &h.name == name)
                    .ok_or_else(|| AlgebraError::UnknownGenerator(name.clone()))?,
            };
            conjugates.push(j);
        }
        for (i, &j) in conjugates.iter().enumerate() {
            if conjugates[j] != i || generators[i].degree != generators[j].degree {
                return Err(AlgebraError::BadBracket(format!(
                    "conjugate of `{}` is not an involution pairing equal degrees",
                    generators[i].name
                )));
            }
        }
        let id = fresh_id();
        let differential = generators
            .iter()
            .map(|_| Element { alg: id, field: field.clone(), terms: BTreeMap::new() })
            .collect();
        Ok(Cdga { id, field: field.clone(), generators, conjugates, differential })
    }

    /// Installs the differential (one image per generator) and validates it.
    /// The algebra keeps its identity, so elements built on the free algebra stay valid.
    pub fn with_differential(mut self, images: Vec<Element>) -> Result<Cdga, AlgebraError> {
        if images.len() != self.generators.len() {
            return Err(AlgebraError::WrongImageCount { expected: self.generators.len(), found: images.len() });
        }
        for (i, x) in images.iter().enumerate() {
            if x.alg != self.id {
                return Err(AlgebraError::MixedAlgebras);
            }
            let expected = self.generators[i].degree + 1;
            match self.degree(x) {
                Degree::Zero => {}
                Degree::Homogeneous(k) if k == expected => {}
                _ => {
                    return Err(AlgebraError::BadDifferentialDegree {
                        generator: self.generators[i].name.clone(),
                        expected,
                    })
                }
            }
        }
        self.differential = images;
        for i in 0..self.generators.len() {
            if !self.d(&self.differential[i]).is_zero() {
                return Err(AlgebraError::DSquaredNonzero(self.generators[i].name.clone()));
            }
        }
        Ok(self)
    }

    /// Chevalley-Eilenberg algebra of a Lie algebra: generators `e1..en` of degree 1 with
    /// `d e^k = -sum_{i<j} c^k_ij e^i e^j` where `[e_i, e_j] = sum_k c^k_ij e_k`.
    pub fn from_lie_algebra(spec: &LieAlgebraSpec) -> Result<Cdga, AlgebraError> {
        let n = spec.dimension;
        let gens = (1..=n).map(|i| Generator::new(format!("e{i}"), 1)).collect();
        let free = Cdga::free(&spec.field, gens)?;
        let mut images = vec![free.zero(); n];
        for (&(i, j), coeffs) in &spec.brackets {
            if i == 0 || j == 0 || i >= j || j > n || coeffs.len() != n {
                return Err(AlgebraError::BadBracket(format!("[e{i}, e{j}]")));
            }
            let m = Monomial::generator(i - 1).mul(Monomial::generator(j - 1)).expect("i < j").1;
            for (k, c) in coeffs.iter().enumerate() {
                images[k].add_term(m, -c);
            }
        }
        match free.with_differential(images) {
            Err(AlgebraError::DSquaredNonzero(name)) => {
                Err(AlgebraError::JacobiFailure(name[1..].parse().unwrap_or(0)))
            }
            other => other,
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_index(&self, name: &str) -> Result<usize, AlgebraError> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))
    }

    pub fn differential_of_generator(&self, i: usize) -> &Element {
        &self.differential[i]
    }

    pub fn zero(&self) -> Element {
        Element { alg: self.id, field: self.field.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> Element {
        self.term(Scalar::one(&self.field), Monomial::ONE)
    }

    pub fn scalar(&self, c: Scalar) -> Element {
        self.term(c, Monomial::ONE)
    }

    pub fn term(&self, c: Scalar, m: Monomial) -> Element {
        let mut x = self.zero();
        x.add_term(m, c);
        x
    }

    pub fn generator(&self, i: usize) -> Element {
        self.term(Scalar::one(&self.field), Monomial::generator(i))
    }

    pub fn gen(&self, name: &str) -> Result<Element, AlgebraError> {
        Ok(self.generator(self.generator_index(name)?))
    }

    /// Ordered product of the named generators (zero on a repeat).
    pub fn monomial(&self, names: &[&str]) -> Result<Element, AlgebraError> {
        let idx = names.iter().map(|n| self.generator_index(n)).collect::<Result<Vec<_>, _>>()?;
        Ok(match Monomial::from_indices(&idx) {
            None => self.zero(),
            Some((neg, m)) => {
                let one = Scalar::one(&self.field);
                self.term(if neg { -one } else { one }, m)
            }
        })
    }

    pub fn monomial_degree(&self, m: Monomial) -> u32 {
        m.indices().map(|i| self.generators[i].degree).sum()
    }

    pub fn degree(&self, x: &Element) -> Degree {
        let mut deg = None;
        for m in x.terms.keys() {
            let k = self.monomial_degree(*m);
            match deg {
                None => deg = Some(k),
                Some(d) if d != k => return Degree::Mixed,
                _ => {}
            }
        }
        deg.map_or(Degree::Zero, Degree::Homogeneous)
    }

    /// Checks that `x` is homogeneous of degree `k` (zero counts as any degree).
    pub fn expect_degree(&self, x: &Element, k: u32) -> Result<(), AlgebraError> {
        match self.degree(x) {
            Degree::Zero => Ok(()),
            Degree::Homogeneous(d) if d == k => Ok(()),
            _ => Err(AlgebraError::DegreeMismatch { expected: k }),
        }
    }

    pub fn top_degree(&self) -> u32 {
        self.generators.iter().map(|g| g.degree).sum()
    }

    /// All monomials of total degree `k`, in increasing order.
    pub fn monomials_of_degree(&self, k: u32) -> Vec<Monomial> {
        let n = self.generators.len();
        let mut out: Vec<Monomial> = (0..1u64 << n)
            .map(Monomial)
            .filter(|m| self.monomial_degree(*m) == k)
            .collect();
        out.sort();
        out
    }

    pub fn wedge(&self, x: &Element, y: &Element) -> Result<Element, AlgebraError> {
        self.check(x)?;
        x.try_wedge(y)
    }

    fn check(&self, x: &Element) -> Result<(), AlgebraError> {
        if x.alg != self.id {
            return Err(AlgebraError::MixedAlgebras);
        }
        Ok(())
    }

    /// The differential, extended by the graded Leibniz rule.
    pub fn d(&self, x: &Element) -> Element {
        let mut out = self.zero();
        for (m, c) in &x.terms {
            for (pos, i) in m.indices().enumerate() {
                let dg = &self.differential[i];
                if dg.is_zero() {
                    continue;
                }
                // d g_i has even degree, so it moves to the front without a sign
                let rest = m.without(i);
                for (m2, c2) in &dg.terms {
                    if let Some((neg, prod)) = m2.mul(rest) {
                        let mut coef = c * c2;
                        if neg ^ (pos % 2 == 1) {
                            coef = -coef;
                        }
                        out.add_term(prod, coef);
                    }
                }
            }
        }
        out
    }

    pub fn try_d(&self, x: &Element) -> Result<Element, AlgebraError> {
        self.check(x)?;
        Ok(self.d(x))
    }

    /// Coordinates of the degree-`k` part of `x` in [`Cdga::monomials_of_degree`].
    pub fn coords(&self, x: &Element, basis: &[Monomial]) -> Vector {
        basis.iter().map(|m| x.coefficient(*m)).collect()
    }

    pub fn from_coords(&self, basis: &[Monomial], coords: &[Scalar]) -> Element {
        let mut out = self.zero();
        for (m, c) in basis.iter().zip(coords) {
            out.add_term(*m, c.clone());
        }
        out
    }

    /// Matrix of `d` from degree `k` to degree `k+1` in the monomial bases.
    pub fn differential_matrix(&self, k: u32) -> Matrix {
        let src = self.monomials_of_degree(k);
        let dst = self.monomials_of_degree(k + 1);
        let cols: Vec<Vector> = src
            .iter()
            .map(|m| self.coords(&self.d(&self.term(Scalar::one(&self.field), *m)), &dst))
            .collect();
        Matrix::from_columns(&self.field, dst.len(), &cols).expect("column lengths agree")
    }

    /// Complex conjugation: swaps each generator with its declared conjugate and
    /// conjugates coefficients.
    pub fn conjugate(&self, x: &Element) -> Element {
        let mut out = self.zero();
        for (m, c) in &x.terms {
            let idx: Vec<usize> = m.indices().map(|i| self.conjugates[i]).collect();
            let (neg, m2) = Monomial::from_indices(&idx).expect("conjugation permutes generators");
            let c2 = c.conj();
            out.add_term(m2, if neg { -c2 } else { c2 });
        }
        out
    }

    /// `x(v1, v2)` for a degree-2 element, with vectors in generator coordinates.
    pub fn evaluate_on_plane(&self, x: &Element, v1: &[Scalar], v2: &[Scalar]) -> Result<Scalar, AlgebraError> {
        self.expect_degree(x, 2)?;
        let n = self.generators.len();
        if v1.len() != n || v2.len() != n {
            return Err(AlgebraError::WrongImageCount { expected: n, found: v1.len().min(v2.len()) });
        }
        let mut acc = Scalar::zero(&self.field);
        for (m, c) in &x.terms {
            let idx: Vec<usize> = m.indices().collect();
            let (i, j) = (idx[0], idx[1]);
            let minor = &(&v1[i] * &v2[j]) - &(&v1[j] * &v2[i]);
            acc += &(c * &minor);
        }
        Ok(acc)
    }

    /// Human-readable rendering in the expression grammar the workbench parses.
    pub fn render(&self, x: &Element) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in x.terms.iter().enumerate() {
            let (neg, mag) = match c.as_rational() {
                Some(r) if r.is_negative() => (true, -c),
                _ => (false, c.clone()),
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.indices().map(|i| self.generators[i].name.as_str()).collect::<Vec<_>>().join("*");
            let coef = if mag.as_rational().is_some() { mag.to_string() } else { format!("({mag})") };
            match (mag.is_one(), m.is_one()) {
                (true, true) => out.push('1'),
                (true, false) => out.push_str(&mono),
                (false, true) => out.push_str(&coef),
                (false, false) => {
                    out.push_str(&coef);
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        out
    }
}

/// Structure constants of a Lie algebra: `[e_i, e_j] = sum_k c^k_ij e_k` for `i < j`
/// (1-based indices), each stored as the vector `(c^1_ij, ..., c^n_ij)`.
#[derive(Clone, Debug)]
pub struct LieAlgebraSpec {
    pub field: FieldRef,
    pub dimension: usize,
    pub brackets: BTreeMap<(usize, usize), Vec<Scalar>>,
}

impl LieAlgebraSpec {
    pub fn new(field: &FieldRef, dimension: usize) -> Self {
        LieAlgebraSpec { field: field.clone(), dimension, brackets: BTreeMap::new() }
    }

    /// Adds `c * e_k` to `[e_i, e_j]`, normalizing to `i < j` by antisymmetry.
    pub fn bracket(mut self, i: usize, j: usize, k: usize, c: Scalar) -> Self {
        let (a, b, c) = if i < j { (i, j, c) } else { (j, i, -c) };
        let n = self.dimension;
        let entry = self.brackets.entry((a, b)).or_insert_with(|| vec![Scalar::zero(&c.field().clone()); n]);
        if (1..=n).contains(&k) {
            entry[k - 1] += &c;
        }
        self
    }
}

/// An algebra map between two free algebras defined by generator images, with its inverse.
#[derive(Clone, Debug)]
pub struct CdgaIsomorphism {
    source: u64,
    target: u64,
    forward: Vec<Element>,
    backward: Vec<Element>,
    commutes_with_d: bool,
}

fn apply_images(images: &[Element], target: &Element, x: &Element) -> Element {
    let mut out = target.empty_like();
    for (m, c) in &x.terms {
        let mut acc = target.empty_like();
        acc.add_term(Monomial::ONE, c.clone());
        for i in m.indices() {
            acc = acc.wedge(&images[i]);
        }
        out = &out + &acc;
    }
    out
}

impl CdgaIsomorphism {
    /// Builds the map `source -> target` sending generator `i` to `images[i]`.
    /// Each image must have the degree of its generator, and the induced linear map on
    /// generators must be invertible.
    pub fn new(source: &Cdga, target: &Cdga, images: Vec<Element>) -> Result<Self, AlgebraError> {
        let n = source.num_generators();
        if images.len() != n || target.num_generators() != n {
            return Err(AlgebraError::WrongImageCount { expected: n, found: images.len() });
        }
        let field = source.field();
        // images must be linear in the target generators
        let mut cols = Vec::with_capacity(n);
        for (i, x) in images.iter().enumerate() {
            target.check(x)?;
            target.expect_degree(x, source.generators[i].degree)?;
            let mut col = vec![Scalar::zero(field); n];
            for (m, c) in &x.terms {
                if m.len() != 1 {
                    return Err(AlgebraError::NotInvertible);
                }
                let j = m.indices().next().expect("one index");
                if target.generators[j].degree != source.generators[i].degree {
                    return Err(AlgebraError::NotInvertible);
                }
                col[j] = c.clone();
            }
            cols.push(col);
        }
        let a = Matrix::from_columns(field, n, &cols).expect("square");
        let inv = a.inverse().map_err(|e| match e {
            LinAlgError::Singular => AlgebraError::NotInvertible,
            _ => AlgebraError::NotInvertible,
        })?;
        let backward = (0..n)
            .map(|j| {
                let mut x = source.zero();
                for i in 0..n {
                    x.add_term(Monomial::generator(i), inv.get(i, j).clone());
                }
                x
            })
            .collect();
        let mut iso = CdgaIsomorphism {
            source: source.id,
            target: target.id,
            forward: images,
            backward,
            commutes_with_d: true,
        };
        iso.commutes_with_d = (0..n).all(|i| {
            let g = source.generator(i);
            let lhs = target.d(&iso.forward(&g).expect("source element"));
            let rhs = iso.forward(&source.d(&g)).expect("source element");
            lhs == rhs
        });
        Ok(iso)
    }

    /// Builds the target algebra on `target_generators` whose differential is transported
    /// along the substitution, so the result is a CDGA isomorphism by construction.
    /// `images` are given as term lists over the new generators.
    pub fn transport(
        source: &Cdga,
        target_generators: Vec<Generator>,
        images: impl FnOnce(&Cdga) -> Result<Vec<Element>, AlgebraError>,
    ) -> Result<(Cdga, CdgaIsomorphism), AlgebraError> {
        let free = Cdga::free(source.field(), target_generators)?;
        let imgs = images(&free)?;
        let provisional = CdgaIsomorphism::new(source, &free, imgs.clone())?;
        let dt = (0..free.num_generators())
            .map(|k| {
                let pre = provisional.inverse(&free.generator(k)).expect("target element");
                provisional.forward(&source.d(&pre)).expect("source element")
            })
            .collect();
        let target = free.with_differential(dt)?;
        let iso = CdgaIsomorphism::new(source, &target, imgs)?;
        debug_assert!(iso.commutes_with_d);
        Ok((target, iso))
    }

    /// Like [`CdgaIsomorphism::new`] but rejects maps that do not commute with `d`.
    pub fn new_chain_map(source: &Cdga, target: &Cdga, images: Vec<Element>) -> Result<Self, AlgebraError> {
        let iso = Self::new(source, target, images)?;
        if !iso.commutes_with_d {
            let bad = (0..source.num_generators())
                .find(|&i| {
                    let g = source.generator(i);
                    target.d(&iso.forward(&g).unwrap()) != iso.forward(&source.d(&g)).unwrap()
                })
                .unwrap_or(0);
            return Err(AlgebraError::NotChainMap(source.generators[bad].name.clone()));
        }
        Ok(iso)
    }

    pub fn commutes_with_d(&self) -> bool {
        self.commutes_with_d
    }

    pub fn images(&self) -> &[Element] {
        &self.forward
    }

    pub fn forward(&self, x: &Element) -> Result<Element, AlgebraError> {
        if x.alg != self.source {
            return Err(AlgebraError::MixedAlgebras);
        }
        Ok(apply_images(&self.forward, &self.forward_template(x), x))
    }

    pub fn inverse(&self, y: &Element) -> Result<Element, AlgebraError> {
        if y.alg != self.target {
            return Err(AlgebraError::MixedAlgebras);
        }
        let template = Element { alg: self.source, field: y.field.clone(), terms: BTreeMap::new() };
        Ok(apply_images(&self.backward, &template, y))
    }

    fn forward_template(&self, x: &Element) -> Element {
        Element { alg: self.target, field: x.field.clone(), terms: BTreeMap::new() }
    }
}
