//! Antilinear operators `x ↦ M·conj(x)`.
//!
//! Composition rules, with `L` linear and `A = (M, conj)`:
//!
//! * `A₁∘A₂` is linear with matrix `M₁·conj(M₂)`
//! * `A∘L` is antilinear with matrix `M·conj(L)`
//! * `L∘A` is antilinear with matrix `L·M`
//! * `A*` is antilinear with matrix `Mᵀ`

use super::matrix::{ComplexMatrix, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct AntilinearOp {
    mat: ComplexMatrix,
}

impl AntilinearOp {
    /// Panics if `mat` is not square.
    pub fn new(mat: ComplexMatrix) -> Self {
        assert!(mat.is_square(), "antilinear operator needs a square matrix");
        Self { mat }
    }

    /// Entrywise complex conjugation on `C^n`.
    pub fn conjugation(n: usize) -> Self {
        Self::new(ComplexMatrix::identity(n))
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let cx: Vec<C64> = x.iter().map(|z| z.conj()).collect();
        self.mat.apply(&cx)
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.mat.transpose())
    }

    /// `self ∘ other` for two antilinear maps; the result is linear.
    pub fn compose(&self, other: &AntilinearOp) -> ComplexMatrix {
        &self.mat * &other.mat.conj()
    }

    /// `self ∘ l` for linear `l`.
    pub fn after_linear(&self, l: &ComplexMatrix) -> Self {
        Self::new(&self.mat * &l.conj())
    }

    /// `l ∘ self` for linear `l`.
    pub fn before_linear(&self, l: &ComplexMatrix) -> Self {
        Self::new(l * &self.mat)
    }

    /// The linear map `X ↦ A X A` for antilinear `A`, as a matrix: `M conj(X) conj(M)`.
    pub fn sandwich(&self, x: &ComplexMatrix) -> ComplexMatrix {
        &(&self.mat * &x.conj()) * &self.mat.conj()
    }

    /// `‖A² − 1‖_F`
    pub fn involution_residual(&self) -> f64 {
        self.compose(self).distance(&ComplexMatrix::identity(self.dim()))
    }

    /// `‖M*M − 1‖_F`; antiunitarity of `A` is unitarity of its matrix.
    pub fn unitarity_residual(&self) -> f64 {
        (&self.mat.adjoint() * &self.mat).distance(&ComplexMatrix::identity(self.dim()))
    }
}
