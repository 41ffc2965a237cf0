//! Blow-up of a ring along one or more disjoint centers.
//!
//! Degree `d` of the blow-up is `H^d(M)` followed, for every center `N` and every
//! `j = 1..k-1`, by `H^{d-2j}(N) sigma^j`.

use std::collections::BTreeMap;

use crate::linalg::{axpy, zero_vector, Matrix, Subspace, Vector};
use crate::ring::{gysin_maps, CohClass, GradedMap, GradedRing, LefschetzEntry};
use crate::scalars::{FieldRef, Scalar};

use super::{inconsistent, SurgeryError};

#[derive(Clone, Debug)]
pub struct Center {
    pub name: String,
    pub ring: GradedRing,
    /// Restriction `H(M) -> H(N)`.
    pub restriction: GradedMap,
    /// Half the real codimension, `k`.
    pub codim_half: u32,
    /// Chern classes `c_1, ..., c_{k-1}` of the normal bundle; missing entries are zero.
    pub chern: Vec<CohClass>,
    /// Poincare dual of `N` in `H^{2k}(M)`; computed from the Gysin map when absent.
    pub pd: Option<CohClass>,
}

#[derive(Clone, Debug)]
pub struct BlowupData {
    pub base: GradedRing,
    pub centers: Vec<Center>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Base(usize),
    Fiber { center: usize, power: u32, index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberPart {
    pub center: usize,
    pub power: u32,
    pub class: CohClass,
}

/// A homogeneous class split into its pulled-back part and its `sigma`-parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupRingElement {
    pub degree: u32,
    pub base: CohClass,
    pub fibers: Vec<FiberPart>,
}

/// Everything needed to multiply basis classes; the assembled ring is built from it.
#[derive(Clone, Debug)]
pub struct Layout {
    data: BlowupData,
    gysin: Vec<Vec<Matrix>>,
    pds: Vec<CohClass>,
    slots: Vec<Vec<Slot>>,
    offsets: BTreeMap<(u32, usize, u32), usize>,
}

#[derive(Clone, Debug)]
pub struct BlowupRing {
    layout: Layout,
    ring: GradedRing,
}

impl std::ops::Deref for BlowupRing {
    type Target = Layout;
    fn deref(&self) -> &Layout {
        &self.layout
    }
}

impl BlowupRing {
    pub fn new(data: BlowupData) -> Result<BlowupRing, SurgeryError> {
        let m = &data.base;
        let field = m.field().clone();
        let top = m.top();
        let mut gysin = Vec::new();
        let mut pds = Vec::new();
        for c in &data.centers {
            let k = c.codim_half;
            if k < 2 {
                return Err(inconsistent(format!("center {}: codim_half must be at least 2", c.name)));
            }
            if c.ring.top() + 2 * k != top {
                return Err(inconsistent(format!(
                    "center {}: dimension {} plus codimension {} differs from {top}",
                    c.name,
                    c.ring.top(),
                    2 * k
                )));
            }
            if c.chern.len() > (k - 1) as usize {
                return Err(inconsistent(format!("center {}: too many Chern classes", c.name)));
            }
            for (i, ch) in c.chern.iter().enumerate() {
                if ch.degree != 2 * (i as u32 + 1) || ch.coords.len() != c.ring.dim(ch.degree) {
                    return Err(inconsistent(format!("center {}: c_{} has the wrong degree", c.name, i + 1)));
                }
            }
            let g = gysin_maps(m, &c.ring, &c.restriction, 2 * k)?;
            let pd = CohClass::new(2 * k, g[0].column(0));
            if let Some(given) = &c.pd {
                if *given != pd {
                    return Err(inconsistent(format!("center {}: supplied Poincare dual disagrees with the Gysin image of 1", c.name)));
                }
            }
            gysin.push(g);
            pds.push(pd);
        }

        let mut slots = Vec::new();
        let mut offsets = BTreeMap::new();
        for d in 0..=top {
            let mut level: Vec<Slot> = (0..m.dim(d)).map(Slot::Base).collect();
            for (ci, c) in data.centers.iter().enumerate() {
                for j in 1..c.codim_half {
                    if d < 2 * j {
                        continue;
                    }
                    offsets.insert((d, ci, j), level.len());
                    for index in 0..c.ring.dim(d - 2 * j) {
                        level.push(Slot::Fiber { center: ci, power: j, index });
                    }
                }
            }
            slots.push(level);
        }

        let layout = Layout { data, gysin, pds, slots, offsets };
        let dims: Vec<usize> = layout.slots.iter().map(Vec::len).collect();
        let unit = layout.embed_base(&layout.data.base.unit()).coords;
        let ring = GradedRing::from_products(&field, dims, layout.labels(), unit, |p, i, q, j| layout.basis_product(p, i, q, j));
        let ring = match layout.base_integral() {
            Some(f) => ring.with_integral(f),
            None => ring,
        };
        let failures = ring.validate();
        if !failures.is_empty() {
            return Err(SurgeryError::InconsistentData(failures));
        }
        Ok(BlowupRing { layout, ring })
    }

    pub fn ring(&self) -> &GradedRing {
        &self.ring
    }

    pub fn data(&self) -> &BlowupData {
        &self.data
    }

    /// `PD(N)` for each center, as used in the relation for `sigma^k`.
    pub fn poincare_duals(&self) -> &[CohClass] {
        &self.pds
    }

    pub fn gysin(&self, center: usize) -> &[Matrix] {
        &self.gysin[center]
    }

    pub fn dim(&self, d: u32) -> usize {
        self.ring.dim(d)
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        self.ring.dims().to_vec()
    }
}

impl Layout {
    fn field(&self) -> &FieldRef {
        self.data.base.field()
    }

    fn base_integral(&self) -> Option<Vector> {
        let m = &self.data.base;
        let top = m.top();
        if m.dim(top) == 0 {
            return None;
        }
        let f: Vector = (0..m.dim(top)).map(|i| m.integrate(&m.basis_class(top, i))).collect::<Result<_, _>>().ok()?;
        let mut v = zero_vector(self.field(), self.slots[top as usize].len());
        v[..f.len()].clone_from_slice(&f);
        Some(v)
    }

    fn labels(&self) -> Vec<Vec<String>> {
        self.slots
            .iter()
            .enumerate()
            .map(|(d, level)| {
                level
                    .iter()
                    .map(|s| match *s {
                        Slot::Base(i) => self.data.base.labels(d as u32)[i].clone(),
                        Slot::Fiber { center, power, index } => {
                            let c = &self.data.centers[center];
                            let sigma = if power == 1 { format!("s_{}", c.name) } else { format!("s_{}^{power}", c.name) };
                            let b = &c.ring.labels(d as u32 - 2 * power)[index];
                            if b == "1" {
                                sigma
                            } else {
                                format!("{b}*{sigma}")
                            }
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `pi^*` of a class of `M`.
    pub fn embed_base(&self, x: &CohClass) -> CohClass {
        let mut v = zero_vector(self.field(), self.slots[x.degree as usize].len());
        v[..x.coords.len()].clone_from_slice(&x.coords);
        CohClass::new(x.degree, v)
    }

    /// `beta * sigma^j` for `beta` in `H(N_center)`, reduced so that the power stays below `k`.
    pub fn fiber_class(&self, center: usize, beta: &CohClass, power: u32) -> CohClass {
        let d = beta.degree + 2 * power;
        CohClass::new(d, self.reduce(center, beta, power))
    }

    /// The class `sigma` of a center (`1 * sigma^1`).
    pub fn sigma(&self, center: usize) -> CohClass {
        self.fiber_class(center, &self.data.centers[center].ring.unit(), 1)
    }

    fn reduce(&self, ci: usize, eta: &CohClass, p: u32) -> Vector {
        let field = self.field();
        let d = eta.degree + 2 * p;
        let mut out = zero_vector(field, self.ring_dim_or_slots(d));
        let c = &self.data.centers[ci];
        let k = c.codim_half;
        if d > self.data.base.top() || eta.degree > c.ring.top() || eta.is_zero() {
            return out;
        }
        assert!(p >= 1, "sigma power must be positive");
        if p < k {
            let off = self.offsets[&(d, ci, p)];
            out[off..off + eta.coords.len()].clone_from_slice(&eta.coords);
            return out;
        }
        let minus = -Scalar::one(field);
        if p == k {
            let g = self.gysin[ci][eta.degree as usize].mul_vec(&eta.coords).expect("gysin shape");
            axpy(&mut out[..g.len()], &minus, &g);
        } else {
            let rpd = c.restriction.apply(&self.pds[ci]).expect("restriction degree");
            let t = c.ring.mul(&rpd, eta);
            axpy(&mut out, &minus, &self.reduce(ci, &t, p - k));
        }
        for m in 1..k {
            let Some(ch) = c.chern.get((k - m - 1) as usize) else { continue };
            let t = c.ring.mul(ch, eta);
            axpy(&mut out, &minus, &self.reduce(ci, &t, m + p - k));
        }
        out
    }

    fn ring_dim_or_slots(&self, d: u32) -> usize {
        self.slots.get(d as usize).map_or(0, Vec::len)
    }

    fn basis_product(&self, p: u32, i: usize, q: u32, j: usize) -> Vector {
        let m = &self.data.base;
        let field = self.field();
        let d = p + q;
        match (self.slots[p as usize][i], self.slots[q as usize][j]) {
            (Slot::Base(a), Slot::Base(b)) => {
                let mut v = zero_vector(field, self.slots[d as usize].len());
                let prod = m.basis_product(p, a, q, b);
                v[..prod.coords.len()].clone_from_slice(&prod.coords);
                v
            }
            (Slot::Base(a), Slot::Fiber { center, power, index }) => {
                let c = &self.data.centers[center];
                let ra = c.restriction.apply(&m.basis_class(p, a)).expect("restriction degree");
                let beta = c.ring.basis_class(q - 2 * power, index);
                self.reduce(center, &c.ring.mul(&ra, &beta), power)
            }
            (Slot::Fiber { center, power, index }, Slot::Base(b)) => {
                let c = &self.data.centers[center];
                let rb = c.restriction.apply(&m.basis_class(q, b)).expect("restriction degree");
                let beta = c.ring.basis_class(p - 2 * power, index);
                self.reduce(center, &c.ring.mul(&beta, &rb), power)
            }
            (Slot::Fiber { center: c1, power: j1, index: a }, Slot::Fiber { center: c2, power: j2, index: b }) => {
                if c1 != c2 {
                    return zero_vector(field, self.slots[d as usize].len());
                }
                let n = &self.data.centers[c1].ring;
                let prod = n.basis_product(p - 2 * j1, a, q - 2 * j2, b);
                self.reduce(c1, &prod, j1 + j2)
            }
        }
    }

    fn dim(&self, d: u32) -> usize {
        self.ring_dim_or_slots(d)
    }

    /// Pullback subspace `pi^*(V)` inside degree `d`.
    pub fn pullback_subspace(&self, d: u32, v: &Subspace) -> Subspace {
        let vecs = v.basis().iter().map(|b| self.embed_base(&CohClass::new(d, b.clone())).coords).collect();
        Subspace::span(self.field(), self.dim(d), vecs).expect("ambient")
    }

    /// The base summand of degree `d`.
    pub fn base_summand(&self, d: u32) -> Subspace {
        let m = &self.data.base;
        let vecs = (0..m.dim(d)).map(|i| self.embed_base(&m.basis_class(d, i)).coords).collect();
        Subspace::span(self.field(), self.dim(d), vecs).expect("ambient")
    }

    /// `pi^* omega + t * sum_c sigma_c`.
    pub fn symplectic_class(&self, omega: &CohClass, t: &Scalar) -> CohClass {
        let mut v = self.embed_base(omega).coords;
        for ci in 0..self.data.centers.len() {
            axpy(&mut v, t, &self.sigma(ci).coords);
        }
        CohClass::new(2, v)
    }
}

impl BlowupRing {
    pub fn to_class(&self, x: &BlowupRingElement) -> CohClass {
        let mut v = self.embed_base(&x.base).coords;
        for f in &x.fibers {
            let part = self.fiber_class(f.center, &f.class, f.power);
            axpy(&mut v, &Scalar::one(self.field()), &part.coords);
        }
        CohClass::new(x.degree, v)
    }

    pub fn split(&self, x: &CohClass) -> BlowupRingElement {
        let d = x.degree;
        let m = &self.data.base;
        let base = CohClass::new(d, x.coords[..m.dim(d)].to_vec());
        let mut fibers = Vec::new();
        for (ci, c) in self.data.centers.iter().enumerate() {
            for j in 1..c.codim_half {
                if let Some(&off) = self.offsets.get(&(d, ci, j)) {
                    let dim = c.ring.dim(d - 2 * j);
                    if dim > 0 {
                        fibers.push(FiberPart { center: ci, power: j, class: CohClass::new(d - 2 * j, x.coords[off..off + dim].to_vec()) });
                    }
                }
            }
        }
        BlowupRingElement { degree: d, base, fibers }
    }

    pub fn mul(&self, x: &BlowupRingElement, y: &BlowupRingElement) -> BlowupRingElement {
        self.split(&self.ring.mul(&self.to_class(x), &self.to_class(y)))
    }
}

pub const DEFAULT_T_SAMPLES: [(i64, i64); 5] = [(1, 2), (1, 3), (1, 5), (1, 7), (1, 11)];

#[derive(Clone, Debug)]
pub struct BlowupLefschetzSample {
    pub t: Scalar,
    pub entries: Vec<LefschetzEntry>,
    pub kernels: Vec<Subspace>,
    /// Per degree `j >= 2`: whether the kernel equals the predicted pullback subspace
    /// (`None` when no prediction applies).
    pub predicted: Vec<(u32, Option<bool>)>,
    pub satisfied: bool,
}

/// `det` of `omega~^{n-j}: H^j -> H^{2n-j}` as a polynomial in `t`, lowest coefficient first.
#[derive(Clone, Debug)]
pub struct DeterminantCertificate {
    pub degree: u32,
    pub coefficients: Vec<Scalar>,
    pub nonzero: bool,
}

#[derive(Clone, Debug)]
pub struct BlowupLefschetzReport {
    pub samples: Vec<BlowupLefschetzSample>,
    /// Kernel dimensions agree across all samples.
    pub stable: bool,
    pub generic_kernel_dims: Vec<(u32, usize)>,
    pub determinants: Vec<DeterminantCertificate>,
    /// All centers are surfaces, so the degree-2 prediction applies.
    pub surface_centers: bool,
    pub prediction_holds: bool,
    /// At `t = 0` the kernel meets the base summand exactly in `pi^*` of the base kernel.
    pub base_kernel_at_zero: bool,
    pub satisfied: bool,
}

fn kernel_prediction(b: &BlowupRing, omega: &CohClass, j: u32, surface_centers: bool) -> Option<Subspace> {
    let m = &b.data.base;
    let mut ker = m.lefschetz_kernel(omega, j);
    if j == 2 {
        if !surface_centers {
            return None;
        }
        for c in &b.data.centers {
            ker = ker.intersect(&c.restriction.maps[2].kernel()).expect("ambient");
        }
    } else if j < 2 {
        return None;
    }
    Some(b.pullback_subspace(j, &ker))
}

/// Lefschetz maps of `pi^* omega + t sum sigma` at the sampled `t`, with the predicted
/// kernels and a determinant certificate for every square degree.
pub fn blowup_lefschetz(b: &BlowupRing, omega: &CohClass, ts: &[Scalar]) -> BlowupLefschetzReport {
    let field = b.field().clone();
    let ring = b.ring();
    let n = ring.top() / 2;
    let surface_centers = !b.data.centers.is_empty() && b.data.centers.iter().all(|c| c.ring.top() == 2);
    let predictions: Vec<(u32, Option<Subspace>)> = (1..=n).map(|j| (j, kernel_prediction(b, omega, j, surface_centers))).collect();

    let mut samples = Vec::new();
    for t in ts {
        let w = b.symplectic_class(omega, t);
        let report = ring.lefschetz_report(&w);
        let kernels: Vec<Subspace> = (1..=n).map(|j| ring.lefschetz_kernel(&w, j)).collect();
        let predicted = predictions
            .iter()
            .map(|(j, p)| (*j, p.as_ref().map(|s| *s == kernels[(*j - 1) as usize])))
            .collect();
        samples.push(BlowupLefschetzSample { t: t.clone(), satisfied: report.satisfied, entries: report.entries, kernels, predicted });
    }
    let stable = samples.windows(2).all(|w| {
        w[0].entries.iter().zip(&w[1].entries).all(|(a, c)| a.kernel_dim == c.kernel_dim)
    });
    let generic_kernel_dims = samples.first().map(|s| s.entries.iter().map(|e| (e.degree, e.kernel_dim)).collect()).unwrap_or_default();

    let mut determinants = Vec::new();
    for j in 1..=n {
        if ring.dim(j) != ring.dim(2 * n - j) || ring.dim(j) == 0 {
            continue;
        }
        let bound = (ring.dim(j) as u32) * (n - j);
        let det_at = |t: &Scalar| {
            let w = b.symplectic_class(omega, t);
            ring.mul_matrix(&ring.power(&w, n - j), j).determinant().expect("square")
        };
        let coefficients = interpolate(&field, bound, det_at);
        let nonzero = coefficients.iter().any(|c| !c.is_zero());
        determinants.push(DeterminantCertificate { degree: j, coefficients, nonzero });
    }

    let prediction_holds = samples.iter().all(|s| s.predicted.iter().all(|(_, p)| p.unwrap_or(true)));

    let w0 = b.symplectic_class(omega, &Scalar::zero(&field));
    let base_kernel_at_zero = (1..=n).all(|j| {
        let k0 = ring.lefschetz_kernel(&w0, j);
        let base = b.base_summand(j);
        k0.intersect(&base).expect("ambient") == b.pullback_subspace(j, &b.data.base.lefschetz_kernel(omega, j))
    });
    let satisfied = !samples.is_empty() && samples.iter().all(|s| s.satisfied);
    BlowupLefschetzReport {
        samples,
        stable,
        generic_kernel_dims,
        determinants,
        surface_centers,
        prediction_holds,
        base_kernel_at_zero,
        satisfied,
    }
}

/// Coefficients of the polynomial of degree at most `bound` through `(t, f(t))`, `t = 0..=bound`.
fn interpolate(field: &FieldRef, bound: u32, f: impl Fn(&Scalar) -> Scalar) -> Vec<Scalar> {
    let xs: Vec<Scalar> = (0..=bound).map(|t| Scalar::from_i64(field, i64::from(t))).collect();
    let mut dd: Vec<Scalar> = xs.iter().map(&f).collect();
    // divided differences in place
    let n = xs.len();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = &xs[i] - &xs[i - level];
            dd[i] = num.div(&den).expect("distinct nodes");
        }
    }
    // Newton form to monomial coefficients, Horner from the top
    let mut coeffs = vec![Scalar::zero(field); n];
    for i in (0..n).rev() {
        // coeffs = coeffs * (x - xs[i]) + dd[i]
        let mut next = vec![Scalar::zero(field); n];
        for d in 0..n {
            if coeffs[d].is_zero() {
                continue;
            }
            if d + 1 < n {
                next[d + 1] = &next[d + 1] + &coeffs[d];
            }
            next[d] = &next[d] - &(&coeffs[d] * &xs[i]);
        }
        next[0] = &next[0] + &dd[i];
        coeffs = next;
    }
    coeffs
}
