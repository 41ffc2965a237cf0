//! Cohomology-ring models of symplectic blow-ups and orbifold resolutions.
//!
//! Both constructions take finite graded rings as input and assemble a new
//! [`GradedRing`], so every downstream check (pairings, Lefschetz maps) reuses `ring`.

mod blowup;
mod resolution;
mod torus;
mod transfer;

use thiserror::Error;

use crate::ring::RingError;

pub use blowup::{
    blowup_lefschetz, BlowupData, BlowupLefschetzReport, BlowupLefschetzSample, BlowupRing, BlowupRingElement, Center,
    DeterminantCertificate, FiberPart, DEFAULT_T_SAMPLES,
};
pub use resolution::{
    kernel_transfer_check, local_lefschetz, ExceptionalSet, KernelTransferEntry, KernelTransferReport, LocalPart,
    ResolutionData, ResolutionRing, ResolutionRingElement,
};
pub use torus::{pd_of_subtorus, plane_restriction, torus_center, torus_ring};
pub use transfer::{blowup_transfer_hypothesis, resolution_transfer_report, BlowupTransferReport, CenterCheck, TransferReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurgeryError {
    #[error("inconsistent data: {}", .0.join("; "))]
    InconsistentData(Vec<String>),
    #[error("local pairing of exceptional set {name} is degenerate in degree {degree}")]
    DegenerateF { name: String, degree: u32 },
    #[error(transparent)]
    Ring(#[from] RingError),
}

fn inconsistent(msg: impl Into<String>) -> SurgeryError {
    SurgeryError::InconsistentData(vec![msg.into()])
}
