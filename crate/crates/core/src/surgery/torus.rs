//! Two-dimensional subtori spanned by a pair of tangent vectors.

use crate::cohomology::CohomologyRing;
use crate::linalg::{Matrix, Vector};
use crate::ring::{gysin_maps, CohClass, GradedMap, GradedRing};
use crate::scalars::{FieldRef, Scalar};

use super::blowup::Center;
use super::{inconsistent, SurgeryError};

/// `H(T^2)` with basis `1; t1, t2; t1*t2`, integrating `t1*t2` to the covolume.
pub fn torus_ring(field: &FieldRef, covolume: &Scalar) -> GradedRing {
    let one = Scalar::one(field);
    let zero = Scalar::zero(field);
    let labels = vec![vec!["1".to_string()], vec!["t1".to_string(), "t2".to_string()], vec!["t1*t2".to_string()]];
    GradedRing::from_products(field, vec![1, 2, 1], labels, vec![one.clone()], |p, i, q, j| match (p, q) {
        (0, _) => {
            let mut v = vec![zero.clone(); if q == 1 { 2 } else { 1 }];
            v[j] = one.clone();
            v
        }
        (_, 0) => {
            let mut v = vec![zero.clone(); if p == 1 { 2 } else { 1 }];
            v[i] = one.clone();
            v
        }
        _ => match (i, j) {
            (0, 1) => vec![one.clone()],
            (1, 0) => vec![-one.clone()],
            _ => vec![zero.clone()],
        },
    })
    .with_integral(vec![covolume.clone()])
}

/// Restriction `H(M) -> H(T)` obtained by evaluating representatives on the plane.
/// `v1`, `v2` hold the values of the generators on the two vectors.
pub fn plane_restriction(ring: &CohomologyRing, v1: &[Scalar], v2: &[Scalar]) -> Result<GradedMap, SurgeryError> {
    let alg = ring.algebra();
    let field = alg.field();
    let n = alg.num_generators();
    if v1.len() != n || v2.len() != n {
        return Err(inconsistent(format!("plane vectors need {n} coordinates")));
    }
    let mut maps = Vec::new();
    for k in 0..=ring.top() {
        let dim = ring.betti(k);
        let m = match k {
            0 => {
                let row: Vector = (0..dim).map(|i| ring.basis_representative(0, i).coefficient(crate::algebra::Monomial::ONE)).collect();
                Matrix::from_rows(field, dim, vec![row])
            }
            1 => {
                let eval = |v: &[Scalar], i: usize| {
                    let rep = ring.basis_representative(1, i);
                    rep.terms().iter().fold(Scalar::zero(field), |acc, (m, c)| {
                        let g = m.indices().next().expect("degree one");
                        &acc + &(c * &v[g])
                    })
                };
                let r1 = (0..dim).map(|i| eval(v1, i)).collect();
                let r2 = (0..dim).map(|i| eval(v2, i)).collect();
                Matrix::from_rows(field, dim, vec![r1, r2])
            }
            2 => {
                let row = (0..dim)
                    .map(|i| alg.evaluate_on_plane(&ring.basis_representative(2, i), v1, v2))
                    .collect::<Result<Vector, _>>()
                    .map_err(|e| inconsistent(e.to_string()))?;
                Matrix::from_rows(field, dim, vec![row])
            }
            _ => Ok(Matrix::zeros(field, 0, dim)),
        };
        maps.push(m.map_err(|e| inconsistent(e.to_string()))?);
    }
    Ok(GradedMap { maps })
}

/// Poincare dual of the subtorus: the class `P` with `integral(P * a) = covolume * a(v1, v2)`.
pub fn pd_of_subtorus(ring: &CohomologyRing, v1: &[Scalar], v2: &[Scalar], covolume: &Scalar) -> Result<CohClass, SurgeryError> {
    let field = ring.algebra().field();
    let t = torus_ring(field, covolume);
    let r = plane_restriction(ring, v1, v2)?;
    let codim = ring.top().checked_sub(2).ok_or_else(|| inconsistent("ambient dimension below 2"))?;
    let g = gysin_maps(ring.ring(), &t, &r, codim)?;
    Ok(CohClass::new(codim, g[0].column(0)))
}

/// Blow-up center along a subtorus with trivial normal bundle.
pub fn torus_center(
    name: impl Into<String>,
    ring: &CohomologyRing,
    v1: &[Scalar],
    v2: &[Scalar],
    covolume: &Scalar,
) -> Result<Center, SurgeryError> {
    let field = ring.algebra().field();
    let top = ring.top();
    if top < 6 || top % 2 != 0 {
        return Err(inconsistent("a torus center needs an even ambient dimension of at least 6"));
    }
    Ok(Center {
        name: name.into(),
        ring: torus_ring(field, covolume),
        restriction: plane_restriction(ring, v1, v2)?,
        codim_half: (top - 2) / 2,
        chern: Vec::new(),
        pd: None,
    })
}
