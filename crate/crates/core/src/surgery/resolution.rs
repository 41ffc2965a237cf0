//! Resolution of isolated singular points: `H(M~) = H(M) + sum_p H(E_p)` in degrees
//! `0 < d < 2n`, with the local pairings `F_p` feeding the top degree.

use crate::linalg::{axpy, zero_vector, Matrix, Subspace, Vector};
use crate::ring::{CohClass, GradedRing, LefschetzReport};
use crate::scalars::{FieldRef, Scalar};

use super::{inconsistent, SurgeryError};

#[derive(Clone, Debug)]
pub struct ExceptionalSet {
    pub name: String,
    /// Cohomology of `E_p`; graded up to `2n`, only degrees `1..2n-1` are used.
    pub ring: GradedRing,
    /// `pairing[k]` is the matrix of `F_p: H^k(E_p) x H^{2n-k}(E_p) -> scalars`, for `k = 0..=2n`.
    pub pairing: Vec<Matrix>,
    /// Restriction of the symplectic class to `E_p`.
    pub omega: CohClass,
}

#[derive(Clone, Debug)]
pub struct ResolutionData {
    pub base: GradedRing,
    pub exceptional: Vec<ExceptionalSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalPart {
    pub point: usize,
    pub class: CohClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionRingElement {
    pub degree: u32,
    pub base: CohClass,
    pub locals: Vec<LocalPart>,
}

#[derive(Clone, Debug)]
pub struct ResolutionRing {
    data: ResolutionData,
    /// `offsets[d][p]`: start of the `E_p` block in degree `d`.
    offsets: Vec<Vec<usize>>,
    ring: GradedRing,
    pub warnings: Vec<String>,
}

fn local_dim(e: &ExceptionalSet, d: u32, top: u32) -> usize {
    if d == 0 || d >= top {
        0
    } else {
        e.ring.dim(d)
    }
}

impl ResolutionRing {
    pub fn new(data: ResolutionData) -> Result<ResolutionRing, SurgeryError> {
        let m = &data.base;
        let field = m.field().clone();
        let top = m.top();
        if m.dim(top) != 1 {
            return Err(inconsistent(format!("top degree of the base is {}-dimensional", m.dim(top))));
        }
        if m.dim(0) != 1 {
            return Err(inconsistent("degree 0 of the base must be one-dimensional"));
        }
        // the degree-0 basis class is unit_inv times the unit, acting on local classes by that scalar
        let unit_inv = Scalar::one(&field).div(&m.unit().coords[0]).map_err(|_| inconsistent("base unit is zero"))?;
        let mut warnings = Vec::new();
        for e in &data.exceptional {
            if e.ring.top() != top {
                return Err(inconsistent(format!("exceptional set {} is graded up to {}, expected {top}", e.name, e.ring.top())));
            }
            if e.omega.degree != 2 || e.omega.coords.len() != e.ring.dim(2) {
                return Err(inconsistent(format!("exceptional set {}: omega must be a degree-2 class", e.name)));
            }
            if e.pairing.len() != top as usize + 1 {
                return Err(inconsistent(format!("exceptional set {}: expected {} pairing matrices", e.name, top + 1)));
            }
            for k in 1..top {
                let (a, b) = (e.ring.dim(k), e.ring.dim(top - k));
                if a != b {
                    return Err(inconsistent(format!("exceptional set {}: dim H^{k} = {a} but dim H^{} = {b}", e.name, top - k)));
                }
                let f = &e.pairing[k as usize];
                if f.rows() != a || f.cols() != b {
                    return Err(inconsistent(format!("exceptional set {}: pairing in degree {k} has the wrong shape", e.name)));
                }
                if f.rank() != a {
                    return Err(SurgeryError::DegenerateF { name: e.name.clone(), degree: k });
                }
            }
            if e.ring.dim(1) != 0 {
                warnings.push(format!("exceptional set {} has nonzero H^1", e.name));
            }
        }

        let mut offsets = Vec::new();
        let mut dims = Vec::new();
        for d in 0..=top {
            let mut off = Vec::new();
            let mut len = m.dim(d);
            for e in &data.exceptional {
                off.push(len);
                len += local_dim(e, d, top);
            }
            offsets.push(off);
            dims.push(len);
        }
        let labels = (0..=top)
            .map(|d| {
                let mut l: Vec<String> = m.labels(d).to_vec();
                for e in &data.exceptional {
                    for i in 0..local_dim(e, d, top) {
                        l.push(format!("{}:{}", e.name, e.ring.labels(d)[i]));
                    }
                }
                l
            })
            .collect();
        let mut unit = zero_vector(&field, dims[0]);
        unit[..m.dim(0)].clone_from_slice(&m.unit().coords);

        let locate = |d: u32, i: usize| -> (Option<usize>, usize) {
            if i < m.dim(d) {
                return (None, i);
            }
            let off = &offsets[d as usize];
            let p = off.iter().rposition(|&o| o <= i).expect("block");
            (Some(p), i - off[p])
        };
        let ring = GradedRing::from_products(&field, dims.clone(), labels, unit, |p, i, q, j| {
            let d = p + q;
            let mut out = zero_vector(&field, dims[d as usize]);
            match (locate(p, i), locate(q, j)) {
                ((None, a), (None, b)) => {
                    let v = m.basis_product(p, a, q, b).coords;
                    out[..v.len()].clone_from_slice(&v);
                }
                ((None, _), (Some(e), b)) if p == 0 => {
                    out[offsets[d as usize][e] + b] = unit_inv.clone();
                }
                ((Some(e), a), (None, _)) if q == 0 => {
                    out[offsets[d as usize][e] + a] = unit_inv.clone();
                }
                ((None, _), (Some(_), _)) | ((Some(_), _), (None, _)) => {}
                ((Some(e1), a), (Some(e2), b)) => {
                    if e1 != e2 {
                        return out;
                    }
                    let ex = &data.exceptional[e1];
                    if d < top {
                        let v = ex.ring.basis_product(p, a, q, b).coords;
                        let o = offsets[d as usize][e1];
                        out[o..o + v.len()].clone_from_slice(&v);
                    } else if d == top {
                        let f = ex.pairing[p as usize].get(a, b).clone();
                        let vol = volume(m);
                        axpy(&mut out[..vol.len()], &f, &vol);
                    }
                }
            }
            out
        });
        let ring = match top_integral(m, dims[top as usize]) {
            Some(f) => ring.with_integral(f),
            None => ring,
        };
        let failures = ring.validate();
        if !failures.is_empty() {
            return Err(SurgeryError::InconsistentData(failures));
        }
        Ok(ResolutionRing { data, offsets, ring, warnings })
    }

    pub fn ring(&self) -> &GradedRing {
        &self.ring
    }

    pub fn data(&self) -> &ResolutionData {
        &self.data
    }

    fn field(&self) -> &FieldRef {
        self.data.base.field()
    }

    pub fn embed_base(&self, x: &CohClass) -> CohClass {
        let mut v = zero_vector(self.field(), self.ring.dim(x.degree));
        v[..x.coords.len()].clone_from_slice(&x.coords);
        CohClass::new(x.degree, v)
    }

    pub fn embed_local(&self, point: usize, x: &CohClass) -> CohClass {
        let d = x.degree;
        let mut v = zero_vector(self.field(), self.ring.dim(d));
        if local_dim(&self.data.exceptional[point], d, self.ring.top()) > 0 {
            let o = self.offsets[d as usize][point];
            v[o..o + x.coords.len()].clone_from_slice(&x.coords);
        }
        CohClass::new(d, v)
    }

    pub fn to_class(&self, x: &ResolutionRingElement) -> CohClass {
        let mut v = self.embed_base(&x.base).coords;
        for l in &x.locals {
            axpy(&mut v, &Scalar::one(self.field()), &self.embed_local(l.point, &l.class).coords);
        }
        CohClass::new(x.degree, v)
    }

    pub fn split(&self, x: &CohClass) -> ResolutionRingElement {
        let d = x.degree;
        let top = self.ring.top();
        let base = CohClass::new(d, x.coords[..self.data.base.dim(d)].to_vec());
        let locals = self
            .data
            .exceptional
            .iter()
            .enumerate()
            .filter_map(|(p, e)| {
                let n = local_dim(e, d, top);
                (n > 0).then(|| {
                    let o = self.offsets[d as usize][p];
                    LocalPart { point: p, class: CohClass::new(d, x.coords[o..o + n].to_vec()) }
                })
            })
            .collect();
        ResolutionRingElement { degree: d, base, locals }
    }

    pub fn mul(&self, x: &ResolutionRingElement, y: &ResolutionRingElement) -> ResolutionRingElement {
        self.split(&self.ring.mul(&self.to_class(x), &self.to_class(y)))
    }

    /// `(omega, (omega_p)_p)`.
    pub fn symplectic_class(&self, omega: &CohClass) -> CohClass {
        let mut v = self.embed_base(omega).coords;
        for (p, e) in self.data.exceptional.iter().enumerate() {
            axpy(&mut v, &Scalar::one(self.field()), &self.embed_local(p, &e.omega).coords);
        }
        CohClass::new(2, v)
    }

    pub fn pullback_subspace(&self, d: u32, v: &Subspace) -> Subspace {
        let vecs = v.basis().iter().map(|b| self.embed_base(&CohClass::new(d, b.clone())).coords).collect();
        Subspace::span(self.field(), self.ring.dim(d), vecs).expect("ambient")
    }
}

/// The top class integrating to 1.
fn volume(m: &GradedRing) -> Vector {
    let top = m.top();
    let c = m.basis_class(top, 0);
    let s = m.integrate(&c).expect("one-dimensional top");
    vec![Scalar::one(m.field()).div(&s).expect("nonzero volume")]
}

fn top_integral(m: &GradedRing, len: usize) -> Option<Vector> {
    let top = m.top();
    let s = m.integrate(&m.basis_class(top, 0)).ok()?;
    let mut v = zero_vector(m.field(), len);
    v[0] = s;
    Some(v)
}

/// `omega_p^{n-k}: H^k(E_p) -> H^{2n-k}(E_p)` is an isomorphism for `k = 1..n`.
pub fn local_lefschetz(data: &ResolutionData, p: usize) -> bool {
    let e = &data.exceptional[p];
    let top = data.base.top();
    let n = top / 2;
    (1..=n).all(|k| {
        let (a, b) = (e.ring.dim(k), e.ring.dim(top - k));
        a == b && e.ring.mul_matrix(&e.ring.power(&e.omega, n - k), k).kernel().is_zero()
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelTransferEntry {
    pub degree: u32,
    pub base_kernel_dim: usize,
    pub resolved_kernel_dim: usize,
    /// The resolved kernel is `pi^*` of the base kernel.
    pub pullback_matches: bool,
}

#[derive(Clone, Debug)]
pub struct KernelTransferReport {
    pub local: Vec<(String, bool)>,
    pub all_local: bool,
    pub entries: Vec<KernelTransferEntry>,
    pub base: LefschetzReport,
    pub resolved: LefschetzReport,
    /// When every local check passes, the base satisfies Lefschetz iff the resolution does.
    pub biconditional_holds: Option<bool>,
    /// Every entry matches whenever all local checks pass.
    pub consistent: bool,
}

/// Compares the Lefschetz kernels of the base and of the resolution.
pub fn kernel_transfer_check(r: &ResolutionRing, omega: &CohClass) -> KernelTransferReport {
    let data = r.data();
    let m = &data.base;
    let ring = r.ring();
    let n = m.top() / 2;
    let w = r.symplectic_class(omega);
    let local: Vec<(String, bool)> = data.exceptional.iter().enumerate().map(|(p, e)| (e.name.clone(), local_lefschetz(data, p))).collect();
    let all_local = local.iter().all(|(_, ok)| *ok);
    let entries: Vec<KernelTransferEntry> = (1..=n)
        .map(|k| {
            let kb = m.lefschetz_kernel(omega, k);
            let kr = ring.lefschetz_kernel(&w, k);
            KernelTransferEntry {
                degree: k,
                base_kernel_dim: kb.dim(),
                resolved_kernel_dim: kr.dim(),
                pullback_matches: r.pullback_subspace(k, &kb) == kr,
            }
        })
        .collect();
    let base = m.lefschetz_report(omega);
    let resolved = ring.lefschetz_report(&w);
    let biconditional_holds = all_local.then_some(base.satisfied == resolved.satisfied);
    let consistent = !all_local || entries.iter().all(|e| e.base_kernel_dim == e.resolved_kernel_dim && e.pullback_matches);
    KernelTransferReport { local, all_local, entries, base, resolved, biconditional_holds, consistent }
}
