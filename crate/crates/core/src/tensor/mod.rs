//! Dense complex linear algebra: matrices, antilinear maps, Hermitian
//! functional calculus and real-linear kernels.

pub mod antilinear;
pub mod matrix;
pub mod nullspace;
pub mod spectral;

pub use antilinear::AntilinearOp;
pub use matrix::{
    basis_vector, flip, hs_inner, inner, kron, kron_vec, norm, vec_distance, ComplexMatrix, C64, I, ONE, ZERO,
};
pub use nullspace::{real_nullspace, real_orthonormalize, real_span_residual, Nullspace};
pub use spectral::{eigh, herm_apply, herm_power, herm_power_real, herm_power_with};
