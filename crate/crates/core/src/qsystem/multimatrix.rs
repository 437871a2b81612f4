//! Multi-matrix algebras `A = ⊕_α M_{n_α}(C)` with a faithful state
//! `ω = Tr(ρ ·)`, and the Q-system of their GNS representation.
//!
//! The GNS space is `A` itself with `⟨x, y⟩ = ω(x*y)`. Writing
//! `ρ_α = U diag(λ) U*`, the matrices `λ_j^{-1/2} U E_ij U*` are orthonormal,
//! so `x` has coordinates `c_ij = λ_j^{1/2} (U*xU)_ij` in block `α`, stored at
//! `offset_α + i·n_α + j`.

use serde::{Deserialize, Serialize};

use crate::crossing::BipartiteOp;
use crate::error::{Error, Result};
use crate::tensor::matrix::kron_vec;
use crate::tensor::{eigh, ComplexMatrix, C64};

use super::QSystem;

/// Serialized as `{"blocks": [n₁, ...], "rho": [Matrix, ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AlgebraJson", into = "AlgebraJson")]
pub struct MultiMatrixAlgebra {
    blocks: Vec<usize>,
    rho: Vec<ComplexMatrix>,
    // per block: eigenvalues and eigenvectors of ρ_α
    spectra: Vec<(Vec<f64>, ComplexMatrix)>,
}

#[derive(Serialize, Deserialize)]
struct AlgebraJson {
    blocks: Vec<usize>,
    rho: Vec<ComplexMatrix>,
}

impl TryFrom<AlgebraJson> for MultiMatrixAlgebra {
    type Error = Error;
    fn try_from(a: AlgebraJson) -> Result<Self> {
        MultiMatrixAlgebra::new(a.blocks, a.rho)
    }
}

impl From<MultiMatrixAlgebra> for AlgebraJson {
    fn from(a: MultiMatrixAlgebra) -> Self {
        AlgebraJson {
            blocks: a.blocks,
            rho: a.rho,
        }
    }
}

const STATE_TOL: f64 = 1e-9;

impl MultiMatrixAlgebra {
    /// Each `ρ_α` must be Hermitian positive definite with `Σ Tr ρ_α = 1`.
    pub fn new(blocks: Vec<usize>, rho: Vec<ComplexMatrix>) -> Result<Self> {
        if blocks.is_empty() || blocks.len() != rho.len() {
            return Err(Error::InvalidState(format!(
                "{} blocks but {} density blocks",
                blocks.len(),
                rho.len()
            )));
        }
        let mut total = 0.0;
        let mut spectra = Vec::with_capacity(blocks.len());
        for (alpha, (&n, r)) in blocks.iter().zip(&rho).enumerate() {
            if n == 0 || r.shape() != (n, n) {
                return Err(Error::InvalidState(format!(
                    "block {alpha}: size {n} but density is {}x{}",
                    r.rows(),
                    r.cols()
                )));
            }
            let herm = r.hermitian_residual();
            if herm > STATE_TOL * r.frobenius_norm().max(1.0) {
                return Err(Error::InvalidState(format!("block {alpha} is not Hermitian ({herm:.3e})")));
            }
            let (vals, vecs) = eigh(r)?;
            if vals[0] <= STATE_TOL {
                return Err(Error::InvalidState(format!(
                    "block {alpha} is not positive definite (eigenvalue {:.3e})",
                    vals[0]
                )));
            }
            total += r.trace().re;
            spectra.push((vals, vecs));
        }
        if (total - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("total trace is {total}, not 1")));
        }
        Ok(Self { blocks, rho, spectra })
    }

    /// `ρ_α = n_α / Σ n_β² · 1`.
    pub fn standard(blocks: Vec<usize>) -> Result<Self> {
        let total: usize = blocks.iter().map(|n| n * n).sum();
        let rho = blocks
            .iter()
            .map(|&n| ComplexMatrix::identity(n).scale_real(n as f64 / total as f64))
            .collect();
        Self::new(blocks, rho)
    }

    /// Random faithful state: random positive blocks rescaled to total
    /// trace 1.
    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R, blocks: &[usize]) -> Self {
        let rho: Vec<ComplexMatrix> = blocks.iter().map(|&n| crate::random::random_positive(rng, n)).collect();
        let total: f64 = rho.iter().map(|r| r.trace().re).sum();
        let rho = rho.iter().map(|r| r.scale_real(1.0 / total)).collect();
        Self::new(blocks.to_vec(), rho).expect("positive blocks with unit trace")
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn rho(&self) -> &[ComplexMatrix] {
        &self.rho
    }

    /// `Σ n_α²`
    pub fn gns_dim(&self) -> usize {
        self.blocks.iter().map(|n| n * n).sum()
    }

    fn offsets(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .scan(0, |acc, &n| {
                let o = *acc;
                *acc += n * n;
                Some(o)
            })
            .collect()
    }

    /// `Tr(ρ_α⁻¹)` for each block.
    pub fn inverse_traces(&self) -> Vec<f64> {
        self.spectra.iter().map(|(vals, _)| vals.iter().map(|l| 1.0 / l).sum()).collect()
    }

    /// Special exactly when `Tr(ρ_α⁻¹)` does not depend on `α`; that common
    /// value is `d`.
    pub fn is_special(&self) -> bool {
        let t = self.inverse_traces();
        let d = t[0];
        t.iter().all(|x| (x - d).abs() <= STATE_TOL * d)
    }

    /// `ρ_α = n_α / Σ n_β² · 1` for every block.
    pub fn is_standard(&self) -> bool {
        let total = self.gns_dim() as f64;
        self.blocks.iter().zip(&self.rho).all(|(&n, r)| {
            r.distance(&ComplexMatrix::identity(n).scale_real(n as f64 / total)) <= STATE_TOL
        })
    }

    /// GNS coordinates of `x = ⊕ x_α`.
    pub fn coords(&self, x: &[ComplexMatrix]) -> Result<Vec<C64>> {
        self.check_element(x)?;
        let mut out = Vec::with_capacity(self.gns_dim());
        for ((vals, u), xa) in self.spectra.iter().zip(x) {
            let y = &(&u.adjoint() * xa) * u;
            let n = vals.len();
            for i in 0..n {
                for j in 0..n {
                    out.push(y[(i, j)] * vals[j].sqrt());
                }
            }
        }
        Ok(out)
    }

    /// Inverse of [`coords`](Self::coords).
    pub fn element(&self, c: &[C64]) -> Result<Vec<ComplexMatrix>> {
        if c.len() != self.gns_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.gns_dim(),
                found: c.len(),
            });
        }
        Ok(self
            .spectra
            .iter()
            .zip(self.offsets())
            .map(|((vals, u), off)| {
                let n = vals.len();
                let y = ComplexMatrix::from_fn(n, n, |i, j| c[off + i * n + j] / vals[j].sqrt());
                &(u * &y) * &u.adjoint()
            })
            .collect())
    }

    fn check_element(&self, x: &[ComplexMatrix]) -> Result<()> {
        if x.len() != self.blocks.len() {
            return Err(Error::DimensionMismatch {
                expected: self.blocks.len(),
                found: x.len(),
            });
        }
        for (&n, xa) in self.blocks.iter().zip(x) {
            if xa.shape() != (n, n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: xa.rows(),
                });
            }
        }
        Ok(())
    }

    pub fn unit(&self) -> Vec<ComplexMatrix> {
        self.blocks.iter().map(|&n| ComplexMatrix::identity(n)).collect()
    }

    /// `ω(x) = Σ Tr(ρ_α x_α)`
    pub fn state(&self, x: &[ComplexMatrix]) -> C64 {
        self.rho.iter().zip(x).map(|(r, xa)| (r * xa).trace()).sum()
    }

    /// `E_ij` in block `alpha`, zero elsewhere.
    pub fn matrix_unit(&self, alpha: usize, i: usize, j: usize) -> Vec<ComplexMatrix> {
        self.blocks
            .iter()
            .enumerate()
            .map(|(b, &n)| {
                let mut e = ComplexMatrix::zeros(n, n);
                if b == alpha {
                    e[(i, j)] = C64::new(1.0, 0.0);
                }
                e
            })
            .collect()
    }

    /// Orthonormal GNS basis, in coordinate order.
    fn basis(&self) -> Vec<Vec<ComplexMatrix>> {
        let n = self.gns_dim();
        (0..n)
            .map(|k| {
                let mut c = vec![C64::new(0.0, 0.0); n];
                c[k] = C64::new(1.0, 0.0);
                self.element(&c).expect("right length")
            })
            .collect()
    }
}

fn product(x: &[ComplexMatrix], y: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    x.iter().zip(y).map(|(a, b)| a * b).collect()
}

/// The Q-system of the GNS representation: `m(xΩ ⊗ yΩ) = xyΩ`, `ι = 1Ω`.
pub fn from_cstar(a: &MultiMatrixAlgebra) -> Result<QSystem> {
    let n = a.gns_dim();
    let basis = a.basis();
    let mut m = ComplexMatrix::zeros(n, n * n);
    for (p, bp) in basis.iter().enumerate() {
        for (q, bq) in basis.iter().enumerate() {
            let c = a.coords(&product(bp, bq))?;
            for (k, z) in c.into_iter().enumerate() {
                m[(k, p * n + q)] = z;
            }
        }
    }
    QSystem::new(m, a.coords(&a.unit())?)
}

/// `T(x_α ⊗ y_β) = δ_{αβ} Σ_ij x_α y_β E_ij ⊗ ρ_β⁻¹ E_ji`, built without
/// going through `m`.
pub fn twist_of_multimatrix(a: &MultiMatrixAlgebra) -> Result<BipartiteOp> {
    let n = a.gns_dim();
    let basis = a.basis();
    let offsets = a.offsets();
    let block_of = |k: usize| offsets.iter().rposition(|&o| o <= k).expect("offset 0");
    let rho_inv: Vec<ComplexMatrix> = a.rho.iter().map(|r| r.inverse()).collect::<Result<_>>()?;

    // the flip element F_α = Σ_ij E_ij ⊗ E_ji, with the right legs precomputed
    let mut legs: Vec<Vec<(Vec<ComplexMatrix>, Vec<C64>)>> = Vec::new();
    for (alpha, &na) in a.blocks.iter().enumerate() {
        let mut v = Vec::with_capacity(na * na);
        for i in 0..na {
            for j in 0..na {
                let mut right = a.matrix_unit(alpha, j, i);
                right[alpha] = &rho_inv[alpha] * &right[alpha];
                v.push((a.matrix_unit(alpha, i, j), a.coords(&right)?));
            }
        }
        legs.push(v);
    }

    let mut t = ComplexMatrix::zeros(n * n, n * n);
    for (p, bp) in basis.iter().enumerate() {
        for (q, bq) in basis.iter().enumerate() {
            let alpha = block_of(p);
            if block_of(q) != alpha {
                continue;
            }
            let xy = product(bp, bq);
            let mut col = vec![C64::new(0.0, 0.0); n * n];
            for (eij, right) in &legs[alpha] {
                let left = a.coords(&product(&xy, eij))?;
                for (z, w) in col.iter_mut().zip(kron_vec(&left, right)) {
                    *z += w;
                }
            }
            for (k, z) in col.into_iter().enumerate() {
                t[(k, p * n + q)] = z;
            }
        }
    }
    BipartiteOp::with_base_dim(t, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::apply_s;
    use crate::qsystem::{derived_data, twist_certificates, validate};
    use crate::random::{haar_unitary, random_matrix, seeded};
    use crate::tensor::matrix::{basis_vector, vec_distance};
    use crate::tensor::{inner, ComplexMatrix};

    fn diag(x: &[f64]) -> ComplexMatrix {
        ComplexMatrix::diag_real(x)
    }

    fn random_algebra(rng: &mut crate::random::Rng64, blocks: &[usize]) -> MultiMatrixAlgebra {
        MultiMatrixAlgebra::random(rng, blocks)
    }

    #[test]
    fn rejects_bad_states() {
        let bad = |b: Vec<usize>, r: Vec<ComplexMatrix>| matches!(MultiMatrixAlgebra::new(b, r), Err(Error::InvalidState(_)));
        assert!(bad(vec![2], vec![diag(&[0.5, 0.25])]));
        assert!(bad(vec![2], vec![diag(&[1.0, 0.0])]));
        assert!(bad(vec![2], vec![diag(&[1.5, -0.5])]));
        assert!(bad(vec![1, 1], vec![diag(&[1.0])]));
        assert!(bad(vec![2], vec![diag(&[1.0])]));
        let mut nh = diag(&[0.5, 0.5]);
        nh[(0, 1)] = C64::new(0.1, 0.0);
        assert!(bad(vec![2], vec![nh]));
    }

    #[test]
    fn gns_coordinates_are_isometric() {
        let mut rng = seeded(21);
        let a = random_algebra(&mut rng, &[1, 2, 3]);
        for _ in 0..10 {
            let x: Vec<ComplexMatrix> = a.blocks().iter().map(|&n| random_matrix(&mut rng, n, n)).collect();
            let y: Vec<ComplexMatrix> = a.blocks().iter().map(|&n| random_matrix(&mut rng, n, n)).collect();
            let xs: Vec<ComplexMatrix> = x.iter().map(|m| m.adjoint()).collect();
            // ⟨x, y⟩ = ω(x*y)
            let lhs = inner(&a.coords(&x).unwrap(), &a.coords(&y).unwrap());
            let rhs = a.state(&product(&xs, &y));
            assert!((lhs - rhs).norm() < 1e-12);
            let back = a.element(&a.coords(&x).unwrap()).unwrap();
            assert!(back.iter().zip(&x).all(|(p, q)| p.distance(q) < 1e-12));
        }
    }

    #[test]
    fn c_plus_c() {
        let a = MultiMatrixAlgebra::new(vec![1, 1], vec![diag(&[0.5]), diag(&[0.5])]).unwrap();
        assert_eq!(a.gns_dim(), 2);
        assert!(a.is_special());
        assert!(a.is_standard());
        let q = from_cstar(&a).unwrap();
        assert!(validate(&q).passed());
        assert!((q.special_dimension().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn c_plus_c_twist_is_diagonal_with_weights() {
        let a = MultiMatrixAlgebra::new(vec![1, 1], vec![diag(&[0.25]), diag(&[0.75])]).unwrap();
        let t = twist_of_multimatrix(&a).unwrap();
        // orthonormal basis u_α = ρ_α^{-1/2} p_α: T(u_α⊗u_α) = ρ_α⁻¹ u_α⊗u_α
        let want = diag(&[4.0, 0.0, 0.0, 1.0 / 0.75]);
        assert!(t.mat().distance(&want) < 1e-12, "{:?}", t.mat());
    }

    #[test]
    fn m2_with_trace_state() {
        let a = MultiMatrixAlgebra::standard(vec![2]).unwrap();
        assert_eq!(a.rho()[0], diag(&[0.5, 0.5]));
        assert!(a.is_special() && a.is_standard());
        let q = from_cstar(&a).unwrap();
        assert!(validate(&q).passed());
        assert!((q.special_dimension().unwrap() - 4.0).abs() < 1e-12);
        let r = twist_certificates(&q);
        assert!(r.passed(), "{r:?}");
        let t = derived_data(&q).unwrap().t;
        assert!((&t.mat().clone() * t.mat()).distance(&t.mat().scale_real(4.0)) < 1e-10);
        let closed = twist_of_multimatrix(&a).unwrap();
        assert!(closed.mat().distance(t.mat()) < 1e-10);
    }

    #[test]
    fn single_block_is_special_for_any_state() {
        let a = MultiMatrixAlgebra::new(vec![2], vec![diag(&[0.75, 0.25])]).unwrap();
        assert!(a.is_special());
        assert!(!a.is_standard());
        let q = from_cstar(&a).unwrap();
        let d = q.special_dimension().unwrap();
        assert!((d - 16.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn mismatched_blocks_are_not_special() {
        let a = MultiMatrixAlgebra::new(vec![1, 2], vec![diag(&[0.5]), diag(&[0.25, 0.25])]).unwrap();
        assert_eq!(a.inverse_traces(), vec![2.0, 8.0]);
        assert!(!a.is_special());
        let q = from_cstar(&a).unwrap();
        let v = validate(&q);
        assert!(v.passed(), "{v:?}");
        assert!(!v.get("special").unwrap().passed);
        // mm* = ⊕ Tr(ρ_α⁻¹) 1
        let want = diag(&[2.0, 8.0, 8.0, 8.0, 8.0]);
        assert!(q.mm_star().distance(&want) < 1e-10);
        let r = twist_certificates(&q);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn cross_block_products_vanish() {
        let mut rng = seeded(2);
        let a = random_algebra(&mut rng, &[1, 2]);
        let t = twist_of_multimatrix(&a).unwrap();
        let n = a.gns_dim();
        // x in block 0 (index 0), y in block 1 (indices 1..5)
        for q in 1..n {
            for (p, qq) in [(0, q), (q, 0)] {
                let v = t.mat().apply(&basis_vector(n * n, p * n + qq));
                assert!(v.iter().all(|z| z.norm() < 1e-14));
            }
        }
    }

    #[test]
    fn closed_form_matches_gns_twist() {
        let mut rng = seeded(33);
        for blocks in [vec![2], vec![1, 2], vec![1, 1, 2], vec![3]] {
            let a = random_algebra(&mut rng, &blocks);
            let t = derived_data(&from_cstar(&a).unwrap()).unwrap().t;
            let c = twist_of_multimatrix(&a).unwrap();
            assert!(c.mat().rel_distance(t.mat()) < 1e-9);
        }
    }

    #[test]
    fn derived_s_is_gns_tomita() {
        let mut rng = seeded(4);
        let a = random_algebra(&mut rng, &[1, 2]);
        let s = derived_data(&from_cstar(&a).unwrap()).unwrap().s;
        for _ in 0..50 {
            let x: Vec<ComplexMatrix> = a.blocks().iter().map(|&n| random_matrix(&mut rng, n, n)).collect();
            let xs: Vec<ComplexMatrix> = x.iter().map(|m| m.adjoint()).collect();
            let got = apply_s(&s, &a.coords(&x).unwrap());
            assert!(vec_distance(&got, &a.coords(&xs).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn specialness_iff_constant_inverse_trace() {
        let mut rng = seeded(77);
        for k in 0..12 {
            let blocks = vec![1, 2];
            let a = if k % 2 == 0 {
                random_algebra(&mut rng, &blocks)
            } else {
                // rotate diagonal states with equal Tr ρ_α⁻¹ = c
                let u = haar_unitary(&mut rng, 2);
                // ρ₀ = 1/c, ρ₁ eigenvalues λ,μ with 1/λ + 1/μ = c and 1/c + λ + μ = 1
                let c = 5.0 + k as f64;
                // λ + μ = s := 1 − 1/c, λμ = s/c
                let s = 1.0 - 1.0 / c;
                let disc = (s * s - 4.0 * s / c).sqrt();
                let (l, m) = ((s + disc) / 2.0, (s - disc) / 2.0);
                let r1 = &(&u * &diag(&[l, m])) * &u.adjoint();
                MultiMatrixAlgebra::new(blocks, vec![diag(&[1.0 / c]), r1]).unwrap()
            };
            let q = from_cstar(&a).unwrap();
            assert_eq!(a.is_special(), q.special_dimension().is_some(), "case {k}");
            assert_eq!(a.is_special(), k % 2 == 1, "case {k}");
        }
    }

    #[test]
    fn json_round_trip() {
        let a = MultiMatrixAlgebra::new(vec![1, 2], vec![diag(&[0.5]), diag(&[0.25, 0.25])]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(serde_json::from_str::<MultiMatrixAlgebra>(&s).unwrap(), a);
        let bad = s.replace("0.5", "0.6");
        assert!(serde_json::from_str::<MultiMatrixAlgebra>(&bad).is_err());
    }
}
