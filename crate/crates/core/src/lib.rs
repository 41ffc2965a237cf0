//! Exact computations with finitely generated commutative differential graded algebras:
//! cohomology rings, Massey and a-Massey products, Lefschetz maps, and cohomology
//! models of blow-ups and orbifold resolutions.

pub mod algebra;
pub mod cohomology;
pub mod linalg;
pub mod massey;
pub mod ring;
pub mod scalars;
pub mod surgery;
pub mod symmetry;

pub use algebra::{AlgebraError, Cdga, CdgaIsomorphism, Degree, Element, Generator, LieAlgebraSpec, Monomial};
pub use linalg::{LinAlgError, Matrix, Subspace, Vector};
pub use scalars::{Field, FieldRef, FieldSpec, Scalar, ScalarError};
pub use cohomology::{CochainComplex, CohomologyError, CohomologyRing, Subcomplex};
pub use ring::{gysin_maps, CohClass, GradedMap, GradedRing, LefschetzReport, RingError};
pub use symmetry::{invariant_subcomplex, validate_action, ActionReport, GroupAction, SymmetryError};
pub use massey::{a_massey, formality_verdict, higher_massey, triple_massey, AMasseyResult, MasseyCoset, MasseyError, Status, Strategy, Verdict};
pub use surgery::{
    blowup_lefschetz, blowup_transfer_hypothesis, kernel_transfer_check, local_lefschetz, pd_of_subtorus, resolution_transfer_report,
    torus_center, torus_ring, BlowupData, BlowupRing, Center, ExceptionalSet, ResolutionData, ResolutionRing, SurgeryError,
};
