//! Finite cyclic group actions on a CDGA and the invariant subcomplex.

use thiserror::Error;

use crate::algebra::{AlgebraError, Cdga, CdgaIsomorphism, Element, Monomial};
use crate::cohomology::Subcomplex;
use crate::linalg::{Matrix, Subspace, Vector};
use crate::scalars::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("action is incompatible with the algebra: {}", .0.join("; "))]
    ActionIncompatible(Vec<String>),
}

#[derive(Clone, Debug)]
pub enum GroupAction {
    /// Generator `i` is multiplied by `zeta^weights[i]` for a primitive `order`-th root `zeta`.
    Diagonal { order: u32, weights: Vec<i64> },
    /// Generator `i` is sent to `images[i]`.
    Linear { order: u32, images: Vec<Element> },
}

impl GroupAction {
    /// Diagonal action read off the generator weights (missing weights count as 0).
    pub fn diagonal_from_generators(alg: &Cdga, order: u32) -> GroupAction {
        GroupAction::Diagonal { order, weights: alg.generators().iter().map(|g| g.weight.unwrap_or(0)).collect() }
    }

    pub fn identity(alg: &Cdga) -> GroupAction {
        GroupAction::Linear { order: 1, images: (0..alg.num_generators()).map(|i| alg.generator(i)).collect() }
    }

    pub fn order(&self) -> u32 {
        match self {
            GroupAction::Diagonal { order, .. } | GroupAction::Linear { order, .. } => *order,
        }
    }
}

pub fn monomial_weight(weights: &[i64], m: Monomial) -> i64 {
    m.indices().map(|i| weights[i]).sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionReport {
    pub valid: bool,
    pub failures: Vec<String>,
}

fn linear_map(alg: &Cdga, images: &[Element]) -> Result<CdgaIsomorphism, AlgebraError> {
    CdgaIsomorphism::new(alg, alg, images.to_vec())
}

pub fn validate_action(alg: &Cdga, act: &GroupAction) -> ActionReport {
    let mut failures = Vec::new();
    let names: Vec<&str> = alg.generators().iter().map(|g| g.name.as_str()).collect();
    match act {
        GroupAction::Diagonal { order, weights } => {
            if *order == 0 {
                failures.push("order must be positive".to_string());
            } else if weights.len() != alg.num_generators() {
                failures.push(format!("expected {} weights, found {}", alg.num_generators(), weights.len()));
            } else {
                let m = i64::from(*order);
                for (i, name) in names.iter().enumerate() {
                    for t in alg.differential_of_generator(i).terms().keys() {
                        let w = monomial_weight(weights, *t);
                        if (w - weights[i]).rem_euclid(m) != 0 {
                            failures.push(format!(
                                "d({name}) has a term of weight {} but {name} has weight {} (mod {m})",
                                w.rem_euclid(m),
                                weights[i].rem_euclid(m)
                            ));
                            break;
                        }
                    }
                }
            }
        }
        GroupAction::Linear { order, images } => {
            if *order == 0 {
                failures.push("order must be positive".to_string());
            }
            match linear_map(alg, images) {
                Err(e) => failures.push(format!("generator images: {e}")),
                Ok(rho) => {
                    if !rho.commutes_with_d() {
                        failures.push("action does not commute with d".to_string());
                    }
                    // rho^order must fix every generator
                    for (i, name) in names.iter().enumerate() {
                        let mut x = alg.generator(i);
                        for _ in 0..*order {
                            x = rho.forward(&x).expect("same algebra");
                        }
                        if x != alg.generator(i) {
                            failures.push(format!("rho^{order} does not fix {name}"));
                        }
                    }
                }
            }
        }
    }
    ActionReport { valid: failures.is_empty(), failures }
}

/// Invariant forms: weight-zero monomials for a diagonal action, or the image of the
/// averaging projector `(1/m) sum_j rho^j` for a linear one.
pub fn invariant_subcomplex(alg: &Cdga, act: &GroupAction) -> Result<Subcomplex, SymmetryError> {
    let report = validate_action(alg, act);
    if !report.valid {
        return Err(SymmetryError::ActionIncompatible(report.failures));
    }
    match act {
        GroupAction::Diagonal { order, weights } => {
            let m = i64::from(*order);
            Ok(Subcomplex::monomial(alg, |mono| monomial_weight(weights, mono).rem_euclid(m) == 0))
        }
        GroupAction::Linear { order, images } => {
            let rho = linear_map(alg, images).expect("validated");
            let levels = (0..=alg.top_degree()).map(|k| averaging_projector(alg, &rho, *order, k).image()).collect();
            Ok(Subcomplex { levels })
        }
    }
}

/// Matrix of `(1/m) sum_{j<m} rho^j` on degree `k`, in the monomial basis.
pub fn averaging_projector(alg: &Cdga, rho: &CdgaIsomorphism, order: u32, k: u32) -> Matrix {
    let field = alg.field();
    let basis = alg.monomials_of_degree(k);
    let inv_m = Scalar::from_ratio(field, 1, i64::from(order));
    let cols: Vec<Vector> = basis
        .iter()
        .map(|m| {
            let mut x = alg.term(Scalar::one(field), *m);
            let mut acc = alg.zero();
            for _ in 0..order {
                acc = &acc + &x;
                x = rho.forward(&x).expect("same algebra");
            }
            alg.coords(&acc.scale(&inv_m), &basis)
        })
        .collect();
    Matrix::from_columns(field, basis.len(), &cols).expect("square")
}

pub fn averaging_projector_for(alg: &Cdga, act: &GroupAction, k: u32) -> Result<Matrix, SymmetryError> {
    match act {
        GroupAction::Linear { order, images } => {
            let rho = linear_map(alg, images).map_err(|e| SymmetryError::ActionIncompatible(vec![e.to_string()]))?;
            Ok(averaging_projector(alg, &rho, *order, k))
        }
        GroupAction::Diagonal { .. } => Err(SymmetryError::ActionIncompatible(vec![
            "averaging projector needs explicit generator images".to_string(),
        ])),
    }
}

/// Checks that the subcomplex is closed under the product, on all pairs of basis vectors.
pub fn check_product_stable(alg: &Cdga, sub: &Subcomplex) -> Vec<String> {
    let top = alg.top_degree();
    let monos: Vec<Vec<Monomial>> = (0..=top).map(|k| alg.monomials_of_degree(k)).collect();
    let mut failures = Vec::new();
    for p in 0..=top {
        for q in p..=top - p {
            let target: &Subspace = &sub.levels[(p + q) as usize];
            for a in sub.levels[p as usize].basis() {
                let x = alg.from_coords(&monos[p as usize], a);
                for b in sub.levels[q as usize].basis() {
                    let y = alg.from_coords(&monos[q as usize], b);
                    let v = alg.coords(&x.wedge(&y), &monos[(p + q) as usize]);
                    if !target.contains(&v).expect("ambient") {
                        failures.push(format!("{} * {} leaves the subcomplex", alg.render(&x), alg.render(&y)));
                    }
                }
            }
        }
    }
    failures
}
