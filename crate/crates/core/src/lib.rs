//! Finite-dimensional crossing maps.
//!
//! Antilinear involutions `S = JΔ^{1/2}` on `C^N`, the crossing map on
//! operators of `C^N ⊗ C^N`, the endomorphism picture of crossing symmetric
//! operators, twists of Q-systems, and group-invariant solution spaces.

pub mod crossing;
pub mod endomorphisms;
pub mod error;
pub mod io;
pub mod modular;
pub mod qsystem;
pub mod random;
pub mod report;
pub mod symmetry;
pub mod tensor;
pub mod tol;

pub use crossing::BipartiteOp;
pub use error::{Error, Result};
pub use modular::Involution;
pub use qsystem::{FiniteGroup, MultiMatrixAlgebra, QSystem};
pub use report::{Check, VerificationReport};
pub use tensor::{AntilinearOp, ComplexMatrix, C64};
pub use tol::Tolerances;
