//! SU(d)-symmetric random unitaries on `(ℂ^d)^{⊗n}`.
//!
//! The Schur-Weyl decomposition splits the space into sectors
//! `ℂ^{m_λ} ⊗ S^λ`. Unitaries commuting with every transversal `u^{⊗n}` are
//! block diagonal, `⊕_λ I_{m_λ} ⊗ U_λ`, and their Haar moments reduce to
//! per-sector Weingarten formulas. On top of that machinery the crate
//! evaluates late-time OTOCs, errors of covariant erasure codes and
//! neural-tangent-kernel statistics of symmetric variational circuits.

pub mod codes;
pub mod error;
pub mod haar;
pub mod irrep;
pub mod linalg;
pub mod otoc;
pub mod perm;
pub mod qntk;
pub mod rep;
pub mod schur;
pub mod stats;

pub use error::{Error, Result};
