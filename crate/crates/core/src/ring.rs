//! Finite-dimensional graded-commutative rings given by structure constants.
//!
//! Cohomology rings of CDGAs, blow-up rings and resolution rings all end up here, so
//! pairings, Lefschetz maps and Gysin maps are written once.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::linalg::{is_zero_vector, zero_vector, LinAlgError, Matrix, Subspace, Vector};
use crate::scalars::{FieldRef, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("top-degree cohomology is {0}-dimensional, expected 1")]
    TopNotOneDimensional(usize),
    #[error("pairing in degree {0} is degenerate")]
    DegeneratePairing(u32),
    #[error("restriction is not a ring map: {0}")]
    NotRingMap(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// A homogeneous class: a degree and coordinates in that degree's basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohClass {
    pub degree: u32,
    pub coords: Vector,
}

impl CohClass {
    pub fn new(degree: u32, coords: Vector) -> Self {
        CohClass { degree, coords }
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.coords)
    }

    pub fn add(&self, other: &CohClass) -> Result<CohClass, RingError> {
        if self.degree != other.degree || self.coords.len() != other.coords.len() {
            return Err(RingError::DegreeMismatch(format!("adding degree {} to degree {}", self.degree, other.degree)));
        }
        Ok(CohClass::new(self.degree, self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &CohClass) -> Result<CohClass, RingError> {
        if self.degree != other.degree || self.coords.len() != other.coords.len() {
            return Err(RingError::DegreeMismatch(format!("subtracting degree {} from degree {}", other.degree, self.degree)));
        }
        Ok(CohClass::new(self.degree, self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, c: &Scalar) -> CohClass {
        CohClass::new(self.degree, self.coords.iter().map(|x| x * c).collect())
    }
}

/// Products of basis classes: `table[(p, q)][i][j]` holds the coordinates of
/// `basis_p[i] * basis_q[j]` in degree `p + q`.
#[derive(Clone, Debug)]
pub struct GradedRing {
    field: FieldRef,
    dims: Vec<usize>,
    labels: Vec<Vec<String>>,
    table: BTreeMap<(u32, u32), Vec<Vec<Vector>>>,
    unit: Vector,
    /// Integration functional on the top degree (defaults to the first coordinate).
    integral: Option<Vector>,
}

impl GradedRing {
    /// Builds the ring by calling `product(p, i, q, j)` for every pair of basis classes
    /// whose degrees add up to at most the top degree.
    pub fn from_products(
        field: &FieldRef,
        dims: Vec<usize>,
        labels: Vec<Vec<String>>,
        unit: Vector,
        mut product: impl FnMut(u32, usize, u32, usize) -> Vector,
    ) -> GradedRing {
        let top = dims.len() as u32 - 1;
        let mut table = BTreeMap::new();
        for p in 0..=top {
            for q in 0..=top - p {
                let (dp, dq) = (dims[p as usize], dims[q as usize]);
                if dp == 0 || dq == 0 || dims[(p + q) as usize] == 0 {
                    continue;
                }
                let rows = (0..dp).map(|i| (0..dq).map(|j| product(p, i, q, j)).collect()).collect();
                table.insert((p, q), rows);
            }
        }
        GradedRing { field: field.clone(), dims, labels, table, unit, integral: None }
    }

    pub fn with_integral(mut self, integral: Vector) -> Self {
        self.integral = Some(integral);
        self
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn top(&self) -> u32 {
        self.dims.len() as u32 - 1
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, k: u32) -> usize {
        self.dims.get(k as usize).copied().unwrap_or(0)
    }

    pub fn labels(&self, k: u32) -> &[String] {
        &self.labels[k as usize]
    }

    pub fn zero(&self, k: u32) -> CohClass {
        CohClass::new(k, zero_vector(&self.field, self.dim(k)))
    }

    pub fn basis_class(&self, k: u32, i: usize) -> CohClass {
        let mut c = self.zero(k);
        c.coords[i] = Scalar::one(&self.field);
        c
    }

    pub fn unit(&self) -> CohClass {
        CohClass::new(0, self.unit.clone())
    }

    pub fn basis_product(&self, p: u32, i: usize, q: u32, j: usize) -> CohClass {
        match self.table.get(&(p, q)) {
            Some(t) => CohClass::new(p + q, t[i][j].clone()),
            None => self.zero(p + q),
        }
    }

    /// Cup product; anything beyond the top degree is zero.
    pub fn mul(&self, x: &CohClass, y: &CohClass) -> CohClass {
        let deg = x.degree + y.degree;
        let mut out = self.zero(deg);
        let Some(t) = self.table.get(&(x.degree, y.degree)) else {
            return out;
        };
        for (i, a) in x.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                crate::linalg::axpy(&mut out.coords, &ab, &t[i][j]);
            }
        }
        out
    }

    pub fn power(&self, x: &CohClass, p: u32) -> CohClass {
        let mut acc = self.unit();
        for _ in 0..p {
            acc = self.mul(&acc, x);
        }
        acc
    }

    /// Matrix of `y -> x * y` from degree `k` to degree `k + |x|`.
    pub fn mul_matrix(&self, x: &CohClass, k: u32) -> Matrix {
        let target = k + x.degree;
        let cols: Vec<Vector> = (0..self.dim(k)).map(|j| self.mul(x, &self.basis_class(k, j)).coords).collect();
        Matrix::from_columns(&self.field, self.dim(target), &cols).expect("product coordinates")
    }

    /// Evaluates a top-degree class against the fundamental class.
    pub fn integrate(&self, x: &CohClass) -> Result<Scalar, RingError> {
        let top = self.top();
        if x.degree != top {
            return Ok(Scalar::zero(&self.field));
        }
        match &self.integral {
            Some(f) => Ok(f.iter().zip(&x.coords).fold(Scalar::zero(&self.field), |acc, (a, b)| &acc + &(a * b))),
            None => {
                if self.dim(top) != 1 {
                    return Err(RingError::TopNotOneDimensional(self.dim(top)));
                }
                Ok(x.coords[0].clone())
            }
        }
    }

    /// `B(x, y) = integral of x * y * omega^p` for `x` in degree `k` and `y` in the
    /// complementary degree `top - k - 2p`.
    pub fn pairing_matrix(&self, k: u32, omega: Option<&CohClass>, p: u32) -> Result<Matrix, RingError> {
        let top = self.top();
        if self.integral.is_none() && self.dim(top) != 1 {
            return Err(RingError::TopNotOneDimensional(self.dim(top)));
        }
        let shift = match omega {
            Some(w) => w.degree * p,
            None => 0,
        };
        if k + shift > top {
            return Err(RingError::DegreeMismatch(format!("degree {k} with power {p} exceeds the top degree")));
        }
        let other = top - k - shift;
        let wp = match omega {
            Some(w) => self.power(w, p),
            None => self.unit(),
        };
        let mut m = Matrix::zeros(&self.field, self.dim(k), self.dim(other));
        for i in 0..self.dim(k) {
            let xw = self.mul(&self.basis_class(k, i), &wp);
            for j in 0..self.dim(other) {
                let v = self.integrate(&self.mul(&xw, &self.basis_class(other, j)))?;
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// Checks that every Poincare pairing `H^k x H^{top-k}` is nondegenerate.
    pub fn check_poincare_duality(&self) -> Result<(), RingError> {
        for k in 0..=self.top() {
            let m = self.pairing_matrix(k, None, 0)?;
            if m.rows() != m.cols() || m.rank() != m.rows() {
                return Err(RingError::DegeneratePairing(k));
            }
        }
        Ok(())
    }

    /// Kernel of `omega^{n-k}: H^k -> H^{2n-k}`, where `2n` is the top degree.
    pub fn lefschetz_kernel(&self, omega: &CohClass, k: u32) -> Subspace {
        let n = self.top() / 2;
        let p = n.saturating_sub(k);
        self.mul_matrix(&self.power(omega, p), k).kernel()
    }

    pub fn lefschetz_report(&self, omega: &CohClass) -> LefschetzReport {
        let n = self.top() / 2;
        let entries = (1..=n)
            .map(|k| {
                let kernel = self.lefschetz_kernel(omega, k);
                let source = self.dim(k);
                let target = self.dim(2 * n - k);
                LefschetzEntry { degree: k, source_dim: source, target_dim: target, kernel_dim: kernel.dim(), iso: kernel.is_zero() && source == target }
            })
            .collect::<Vec<_>>();
        let satisfied = entries.iter().all(|e| e.iso);
        LefschetzReport { entries, satisfied }
    }

    /// Associativity, graded commutativity and unit checks on basis elements.
    pub fn validate(&self) -> Vec<String> {
        let mut failures = Vec::new();
        let top = self.top();
        for p in 0..=top {
            for i in 0..self.dim(p) {
                let x = self.basis_class(p, i);
                if self.mul(&self.unit(), &x) != x {
                    failures.push(format!("unit fails on {}", self.labels[p as usize][i]));
                }
                for q in 0..=top - p {
                    for j in 0..self.dim(q) {
                        let y = self.basis_class(q, j);
                        let xy = self.mul(&x, &y);
                        let mut yx = self.mul(&y, &x);
                        if (p * q) % 2 == 1 {
                            yx = yx.scale(&-Scalar::one(&self.field));
                        }
                        if xy != yx {
                            failures.push(format!(
                                "commutativity fails on {} and {}",
                                self.labels[p as usize][i], self.labels[q as usize][j]
                            ));
                        }
                        for r in 0..=top - p - q {
                            if self.dim(p + q) == 0 && self.dim(q + r) == 0 {
                                continue;
                            }
                            for l in 0..self.dim(r) {
                                let z = self.basis_class(r, l);
                                if self.mul(&xy, &z) != self.mul(&x, &self.mul(&y, &z)) {
                                    failures.push(format!(
                                        "associativity fails on {}, {}, {}",
                                        self.labels[p as usize][i], self.labels[q as usize][j], self.labels[r as usize][l]
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        failures
    }

    /// Subspace of a degree spanned by given classes.
    pub fn span(&self, k: u32, classes: &[CohClass]) -> Subspace {
        Subspace::span(&self.field, self.dim(k), classes.iter().map(|c| c.coords.clone()).collect())
            .expect("classes of the right degree")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LefschetzEntry {
    pub degree: u32,
    pub source_dim: usize,
    pub target_dim: usize,
    pub kernel_dim: usize,
    pub iso: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LefschetzReport {
    pub entries: Vec<LefschetzEntry>,
    pub satisfied: bool,
}

/// A degree-preserving linear map between two graded rings, one matrix per degree
/// (`maps[k]` sends degree `k` of the source to degree `k` of the target).
#[derive(Clone, Debug)]
pub struct GradedMap {
    pub maps: Vec<Matrix>,
}

impl GradedMap {
    pub fn apply(&self, x: &CohClass) -> Result<CohClass, RingError> {
        match self.maps.get(x.degree as usize) {
            Some(m) => Ok(CohClass::new(x.degree, m.mul_vec(&x.coords)?)),
            None => Err(RingError::DegreeMismatch(format!("no map in degree {}", x.degree))),
        }
    }

    /// Checks that the map sends the unit to the unit and products to products.
    pub fn check_ring_map(&self, source: &GradedRing, target: &GradedRing) -> Result<(), RingError> {
        if self.apply(&source.unit())? != target.unit() {
            return Err(RingError::NotRingMap("unit is not preserved".into()));
        }
        for p in 0..=source.top() {
            for q in p..=source.top() - p {
                for i in 0..source.dim(p) {
                    for j in 0..source.dim(q) {
                        let x = source.basis_class(p, i);
                        let y = source.basis_class(q, j);
                        let lhs = if p + q <= target.top() {
                            self.apply(&source.mul(&x, &y))?
                        } else {
                            continue;
                        };
                        let rhs = target.mul(&self.apply(&x)?, &self.apply(&y)?);
                        if lhs != rhs {
                            return Err(RingError::NotRingMap(format!(
                                "{} * {}",
                                source.labels(p)[i],
                                source.labels(q)[j]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Gysin maps `H^q(N) -> H^{q + codim}(M)` determined by
/// `integral_M(gysin(b) * a) = integral_N(b * restriction(a))`.
///
/// The result is indexed by `q`, for `q = 0..=top(N)`.
pub fn gysin_maps(m: &GradedRing, n: &GradedRing, restriction: &GradedMap, codim: u32) -> Result<Vec<Matrix>, RingError> {
    if n.top() + codim != m.top() {
        return Err(RingError::DegreeMismatch(format!(
            "dim N ({}) + codim ({codim}) != dim M ({})",
            n.top(),
            m.top()
        )));
    }
    restriction.check_ring_map(m, n)?;
    let field = m.field();
    let mut out = Vec::new();
    for q in 0..=n.top() {
        let target = q + codim;
        let comp = m.top() - target;
        // P[i][l] = integral_M(basis_target[i] * basis_comp[l])
        let p = m.pairing_matrix(target, None, 0)?;
        if p.rows() != p.cols() || p.rank() != p.rows() {
            return Err(RingError::DegeneratePairing(target));
        }
        let pn = n.pairing_matrix(q, None, 0)?;
        if pn.rows() != pn.cols() || pn.rank() != pn.rows() {
            return Err(RingError::DegeneratePairing(q));
        }
        let pt = p.transpose();
        let mut cols = Vec::with_capacity(n.dim(q));
        for j in 0..n.dim(q) {
            let b = n.basis_class(q, j);
            let rhs: Vector = (0..m.dim(comp))
                .map(|l| {
                    let ra = restriction.apply(&m.basis_class(comp, l)).expect("restriction degree");
                    n.integrate(&n.mul(&b, &ra))
                })
                .collect::<Result<_, _>>()?;
            cols.push(pt.solve(&rhs)?);
        }
        out.push(Matrix::from_columns(field, m.dim(target), &cols)?);
    }
    Ok(out)
}
