//! Seeded sampling of matrices, unitaries and involutions.
//!
//! Everything draws from a caller-supplied RNG so that a fixed seed gives
//! reproducible output.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::tensor::matrix::{ComplexMatrix, C64};
use crate::tensor::spectral::herm_apply;

pub type Rng64 = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(gaussian(rng), gaussian(rng))
}

/// Complex Gaussian entries.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| random_complex(rng))
}

pub fn random_real_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| C64::new(gaussian(rng), 0.0))
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| random_complex(rng)).collect()
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let a = random_matrix(rng, n, n);
    (&a + &a.adjoint()).scale_real(0.5)
}

/// `A A* / n + 0.1` for Gaussian `A`.
pub fn random_positive<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let a = random_matrix(rng, n, n);
    let p = (&a * &a.adjoint()).scale_real(1.0 / n as f64);
    &p + &ComplexMatrix::identity(n).scale_real(0.1)
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of `diag(R)` absorbed into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = random_matrix(rng, n, n).to_nalgebra();
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let q = ComplexMatrix::from_nalgebra(&q);
    ComplexMatrix::from_fn(n, n, |i, j| {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        q[(i, j)] * phase
    })
}

/// Haar-distributed real orthogonal matrix, as a complex matrix.
pub fn haar_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = nalgebra::DMatrix::<f64>::from_fn(n, n, |_, _| gaussian(rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    ComplexMatrix::from_fn(n, n, |i, j| C64::new(q[(i, j)] * r[(j, j)].signum(), 0.0))
}

/// Matrix of a random antiunitary involution: `W Wᵀ` with Haar `W`, so that
/// `J = W ∘ conj ∘ W*`. Returns `(M_J, W)`.
pub fn random_antiunitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> (ComplexMatrix, ComplexMatrix) {
    let w = haar_unitary(rng, n);
    (&w * &w.transpose(), w)
}

/// A positive `Δ` with `JΔJ = Δ⁻¹` for `J = W ∘ conj ∘ W*`: `Δ = W exp(iB) W*`
/// with `B` real antisymmetric, scaled by `spread`.
pub fn random_modular_operator<R: Rng + ?Sized>(rng: &mut R, w: &ComplexMatrix, spread: f64) -> ComplexMatrix {
    let n = w.rows();
    let b = random_real_matrix(rng, n, n);
    let gen = (&b - &b.transpose()).scale(C64::new(0.0, 0.5 * spread));
    let d = herm_apply(&gen, |x| C64::new(x.exp(), 0.0)).expect("i·antisymmetric is Hermitian");
    &(w * &d) * &w.adjoint()
}

/// `S = JΔ^{1/2}` from [`random_antiunitary`] and [`random_modular_operator`].
pub fn random_involution<R: Rng + ?Sized>(rng: &mut R, n: usize, spread: f64) -> crate::modular::Involution {
    let (mj, w) = random_antiunitary(rng, n);
    let delta = random_modular_operator(rng, &w, spread);
    crate::modular::involution_from_parts(crate::tensor::AntilinearOp::new(mj), delta)
        .expect("valid polar parts by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = seeded(1);
        for n in 1..6 {
            let u = haar_unitary(&mut rng, n);
            assert!((&u.adjoint() * &u).distance(&ComplexMatrix::identity(n)) < 1e-12);
            let o = haar_orthogonal(&mut rng, n);
            assert!((&o.transpose() * &o).distance(&ComplexMatrix::identity(n)) < 1e-12);
        }
    }

    #[test]
    fn seeding_is_deterministic() {
        let a = random_matrix(&mut seeded(7), 3, 3);
        let b = random_matrix(&mut seeded(7), 3, 3);
        assert_eq!(a, b);
    }
}
