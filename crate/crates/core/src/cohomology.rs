//! Cochain complexes of a [`Cdga`] (optionally restricted to a subcomplex) and their
//! cohomology rings with chosen representatives.

use thiserror::Error;

use crate::algebra::{AlgebraError, Cdga, Degree, Element, Monomial};
use crate::linalg::{is_zero_vector, LinAlgError, Matrix, Subspace, Vector};
use crate::ring::{CohClass, GradedRing, RingError};
use crate::scalars::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("element is not a homogeneous cocycle of the complex")]
    NotCocycle,
    #[error("subcomplex is not stable under d in degree {0}")]
    NotDStable(u32),
    #[error("subcomplex has the wrong shape in degree {0}")]
    BadSubcomplex(u32),
    #[error("supplied classes do not form a basis of H^{0}")]
    NotABasis(u32),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A graded subspace of the algebra, one subspace of `Lambda^k` (in the monomial basis
/// of [`Cdga::monomials_of_degree`]) per degree.
#[derive(Clone, Debug)]
pub struct Subcomplex {
    pub levels: Vec<Subspace>,
}

impl Subcomplex {
    pub fn full(alg: &Cdga) -> Subcomplex {
        let levels = (0..=alg.top_degree())
            .map(|k| Subspace::full(alg.field(), alg.monomials_of_degree(k).len()))
            .collect();
        Subcomplex { levels }
    }

    /// Spanned by the monomials that satisfy `keep`.
    pub fn monomial(alg: &Cdga, mut keep: impl FnMut(Monomial) -> bool) -> Subcomplex {
        let field = alg.field();
        let levels = (0..=alg.top_degree())
            .map(|k| {
                let basis = alg.monomials_of_degree(k);
                let vs = basis
                    .iter()
                    .enumerate()
                    .filter(|(_, m)| keep(**m))
                    .map(|(i, _)| crate::linalg::unit_vector(field, basis.len(), i))
                    .collect();
                Subspace::span(field, basis.len(), vs).expect("unit vectors")
            })
            .collect();
        Subcomplex { levels }
    }

    pub fn contains(&self, alg: &Cdga, x: &Element) -> bool {
        (0..self.levels.len() as u32).all(|k| {
            let basis = alg.monomials_of_degree(k);
            let part = x.filter(|m| alg.monomial_degree(m) == k);
            self.levels[k as usize].contains(&alg.coords(&part, &basis)).unwrap_or(false)
        })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(Subspace::dim).collect()
    }
}

#[derive(Clone, Debug)]
struct Level {
    monomials: Vec<Monomial>,
    space: Subspace,
    /// `d: Lambda^k -> Lambda^{k+1}` in monomial coordinates.
    d: Matrix,
    cocycles: Subspace,
    boundaries: Subspace,
    /// Canonical complement of the boundaries inside the cocycles.
    canonical: Subspace,
    reps: Vec<Vector>,
    /// Canonical coordinates -> basis coordinates, when a custom basis was chosen.
    change: Option<Matrix>,
    labels: Vec<String>,
}

/// Cochain complex of a CDGA or of a d-stable subcomplex.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    alg: Cdga,
    sub: Subcomplex,
    d: Vec<Matrix>,
    monomials: Vec<Vec<Monomial>>,
}

impl CochainComplex {
    pub fn new(alg: &Cdga, restrict_to: Option<&Subcomplex>) -> Result<CochainComplex, CohomologyError> {
        let top = alg.top_degree();
        let sub = restrict_to.cloned().unwrap_or_else(|| Subcomplex::full(alg));
        if sub.levels.len() != top as usize + 1 {
            return Err(CohomologyError::BadSubcomplex(sub.levels.len() as u32));
        }
        let monomials: Vec<Vec<Monomial>> = (0..=top).map(|k| alg.monomials_of_degree(k)).collect();
        for k in 0..=top {
            if sub.levels[k as usize].ambient_dim() != monomials[k as usize].len() {
                return Err(CohomologyError::BadSubcomplex(k));
            }
        }
        let d: Vec<Matrix> = (0..=top).map(|k| alg.differential_matrix(k)).collect();
        for k in 0..top {
            let image = sub.levels[k as usize].map(&d[k as usize])?;
            if !sub.levels[k as usize + 1].contains_subspace(&image)? {
                return Err(CohomologyError::NotDStable(k));
            }
        }
        Ok(CochainComplex { alg: alg.clone(), sub, d, monomials })
    }

    pub fn algebra(&self) -> &Cdga {
        &self.alg
    }

    pub fn subcomplex(&self) -> &Subcomplex {
        &self.sub
    }

    pub fn top(&self) -> u32 {
        self.alg.top_degree()
    }

    pub fn monomials(&self, k: u32) -> &[Monomial] {
        &self.monomials[k as usize]
    }

    pub fn d_matrix(&self, k: u32) -> &Matrix {
        &self.d[k as usize]
    }

    pub fn cocycles(&self, k: u32) -> Result<Subspace, CohomologyError> {
        Ok(self.sub.levels[k as usize].intersect(&self.d[k as usize].kernel())?)
    }

    pub fn boundaries(&self, k: u32) -> Result<Subspace, CohomologyError> {
        if k == 0 {
            return Ok(Subspace::zero(self.alg.field(), self.monomials[0].len()));
        }
        Ok(self.sub.levels[k as usize - 1].map(&self.d[k as usize - 1])?)
    }

    pub fn coords(&self, x: &Element, k: u32) -> Vector {
        self.alg.coords(x, &self.monomials[k as usize])
    }

    pub fn element(&self, k: u32, coords: &[Scalar]) -> Element {
        self.alg.from_coords(&self.monomials[k as usize], coords)
    }

    /// Canonical primitive inside the subcomplex: solves `d xi = x` over a basis of the
    /// degree-`(k-1)` piece with free variables zeroed. `None` if `x` is not exact there.
    pub fn primitive(&self, x: &Element, k: u32) -> Result<Option<Element>, CohomologyError> {
        self.alg.expect_degree(x, k)?;
        let target = self.coords(x, k);
        if is_zero_vector(&target) {
            return Ok(Some(self.alg.zero()));
        }
        if k == 0 {
            return Ok(None);
        }
        let src = &self.sub.levels[k as usize - 1];
        let dk = &self.d[k as usize - 1];
        let cols: Vec<Vector> = src.basis().iter().map(|b| dk.mul_vec(b)).collect::<Result<_, _>>()?;
        let a = Matrix::from_columns(self.alg.field(), target.len(), &cols)?;
        match a.solve(&target) {
            Ok(sol) => {
                let mut v = crate::linalg::zero_vector(self.alg.field(), self.monomials[k as usize - 1].len());
                for (c, b) in sol.iter().zip(src.basis()) {
                    crate::linalg::axpy(&mut v, c, b);
                }
                Ok(Some(self.element(k - 1, &v)))
            }
            Err(LinAlgError::NoSolution) => Ok(None),
            Err(e) => Err(e.into()),
        }
    }
}

/// Cohomology of a cochain complex with a chosen basis of representatives per degree,
/// and the induced ring structure.
#[derive(Clone, Debug)]
pub struct CohomologyRing {
    complex: CochainComplex,
    levels: Vec<Level>,
    ring: GradedRing,
}

impl CohomologyRing {
    pub fn build(alg: &Cdga, restrict_to: Option<&Subcomplex>) -> Result<CohomologyRing, CohomologyError> {
        let complex = CochainComplex::new(alg, restrict_to)?;
        let top = complex.top();
        let field = alg.field().clone();
        let mut levels = Vec::new();
        for k in 0..=top {
            let cocycles = complex.cocycles(k)?;
            let boundaries = complex.boundaries(k)?;
            let reduced = cocycles.basis().iter().map(|z| boundaries.reduce(z)).collect::<Result<Vec<_>, _>>()?;
            let canonical = Subspace::span(&field, cocycles.ambient_dim(), reduced)?;
            let reps = canonical.basis().to_vec();
            let labels = reps.iter().map(|r| alg.render(&complex.element(k, r))).collect();
            levels.push(Level {
                monomials: complex.monomials(k).to_vec(),
                space: complex.subcomplex().levels[k as usize].clone(),
                d: complex.d_matrix(k).clone(),
                cocycles,
                boundaries,
                canonical,
                reps,
                change: None,
                labels,
            });
        }
        let ring = Self::assemble(&complex, &levels);
        Ok(CohomologyRing { complex, levels, ring })
    }

    fn project(levels: &[Level], k: u32, v: &[Scalar]) -> Vector {
        let level = &levels[k as usize];
        let r = level.boundaries.reduce(v).expect("ambient length");
        let canon: Vector = level.canonical.pivots().iter().map(|&p| r[p].clone()).collect();
        match &level.change {
            Some(m) => m.mul_vec(&canon).expect("square change of basis"),
            None => canon,
        }
    }

    fn assemble(complex: &CochainComplex, levels: &[Level]) -> GradedRing {
        let alg = complex.algebra();
        let field = alg.field();
        let dims = levels.iter().map(|l| l.reps.len()).collect();
        let labels = levels.iter().map(|l| l.labels.clone()).collect();
        let reps: Vec<Vec<Element>> = levels
            .iter()
            .enumerate()
            .map(|(k, l)| l.reps.iter().map(|r| complex.element(k as u32, r)).collect())
            .collect();
        let unit = Self::project(levels, 0, &complex.coords(&alg.one(), 0));
        GradedRing::from_products(field, dims, labels, unit, |p, i, q, j| {
            let prod = reps[p as usize][i].wedge(&reps[q as usize][j]);
            let k = p + q;
            Self::project(levels, k, &complex.coords(&prod, k))
        })
    }

    /// Replaces the basis of `H^k` by the classes of the given cocycles.
    pub fn with_basis(mut self, k: u32, reps: Vec<Element>, labels: Vec<String>) -> Result<CohomologyRing, CohomologyError> {
        let level_dim = self.levels[k as usize].reps.len();
        if reps.len() != level_dim || labels.len() != level_dim {
            return Err(CohomologyError::NotABasis(k));
        }
        // project in canonical coordinates, then install the new change of basis
        let saved = self.levels[k as usize].change.take();
        let mut cols = Vec::new();
        let mut vecs = Vec::new();
        for r in &reps {
            let v = self.complex.coords(r, k);
            if !self.is_cocycle_vec(k, &v, r)? {
                self.levels[k as usize].change = saved;
                return Err(CohomologyError::NotCocycle);
            }
            cols.push(Self::project(&self.levels, k, &v));
            vecs.push(v);
        }
        let p = Matrix::from_columns(self.complex.algebra().field(), level_dim, &cols)?;
        let Ok(inv) = p.inverse() else {
            self.levels[k as usize].change = saved;
            return Err(CohomologyError::NotABasis(k));
        };
        let level = &mut self.levels[k as usize];
        level.change = Some(inv);
        level.reps = vecs;
        level.labels = labels;
        self.ring = Self::assemble(&self.complex, &self.levels);
        Ok(self)
    }

    fn is_cocycle_vec(&self, k: u32, v: &[Scalar], x: &Element) -> Result<bool, CohomologyError> {
        let alg = self.complex.algebra();
        match alg.degree(x) {
            Degree::Mixed => return Ok(false),
            Degree::Homogeneous(d) if d != k => return Ok(false),
            _ => {}
        }
        Ok(self.levels[k as usize].cocycles.contains(v)?)
    }

    pub fn algebra(&self) -> &Cdga {
        self.complex.algebra()
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    pub fn ring(&self) -> &GradedRing {
        &self.ring
    }

    pub fn top(&self) -> u32 {
        self.complex.top()
    }

    pub fn betti(&self, k: u32) -> usize {
        self.ring.dim(k)
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        self.ring.dims().to_vec()
    }

    pub fn labels(&self, k: u32) -> &[String] {
        self.ring.labels(k)
    }

    pub fn representative(&self, c: &CohClass) -> Element {
        let level = &self.levels[c.degree as usize];
        let mut v = crate::linalg::zero_vector(self.algebra().field(), level.monomials.len());
        for (x, r) in c.coords.iter().zip(&level.reps) {
            crate::linalg::axpy(&mut v, x, r);
        }
        self.complex.element(c.degree, &v)
    }

    pub fn basis_representative(&self, k: u32, i: usize) -> Element {
        self.complex.element(k, &self.levels[k as usize].reps[i])
    }

    /// The class of a homogeneous cocycle of degree `k` lying in the subcomplex.
    pub fn class_of(&self, x: &Element, k: u32) -> Result<CohClass, CohomologyError> {
        let v = self.complex.coords(x, k);
        if !self.is_cocycle_vec(k, &v, x)? {
            return Err(CohomologyError::NotCocycle);
        }
        Ok(CohClass::new(k, Self::project(&self.levels, k, &v)))
    }

    pub fn is_exact(&self, x: &Element, k: u32) -> Result<bool, CohomologyError> {
        Ok(self.class_of(x, k)?.is_zero())
    }

    pub fn cup(&self, a: &CohClass, b: &CohClass) -> CohClass {
        self.ring.mul(a, b)
    }

    pub fn in_subcomplex(&self, x: &Element, k: u32) -> bool {
        let v = self.complex.coords(x, k);
        self.levels[k as usize].space.contains(&v).unwrap_or(false)
            && self.algebra().expect_degree(x, k).is_ok()
    }

    pub fn primitive(&self, x: &Element, k: u32) -> Result<Option<Element>, CohomologyError> {
        self.complex.primitive(x, k)
    }

    pub fn cocycles(&self, k: u32) -> &Subspace {
        &self.levels[k as usize].cocycles
    }

    pub fn boundaries(&self, k: u32) -> &Subspace {
        &self.levels[k as usize].boundaries
    }

    pub fn d_matrix(&self, k: u32) -> &Matrix {
        &self.levels[k as usize].d
    }

    pub fn subcomplex_level(&self, k: u32) -> &Subspace {
        &self.levels[k as usize].space
    }
}
