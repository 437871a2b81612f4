//! Crossing symmetric operators as families of endomorphisms of `H`.
//!
//! Contracting one leg on each side of `T` with vectors,
//!
//! ```text
//! V_{ψ₁,ψ₂}(T) = ½ (a_L(ψ₁) T a_R*(ψ₂) + a_L(ψ₂) T a_R*(ψ₁))
//! ```
//!
//! gives an `R`-bilinear symmetric map into `B(C^N)`, and `T` is crossing
//! symmetric exactly when all of its values preserve `H = ker(S − 1)`.

use crate::crossing::{is_crossing_symmetric, BipartiteOp};
use crate::error::{shape_err, Error, Result};
use crate::modular::{is_endomorphism, Involution, StandardSubspace};
use crate::tensor::matrix::{basis_vector, kron};
use crate::tensor::{ComplexMatrix, C64, I};

/// `a_L(ψ) T a_R*(φ)`; entry `(x, y)` is `Σ_{a,b} conj(ψ_a) φ_b T[(a,x),(y,b)]`.
pub fn contract(t: &BipartiteOp, psi: &[C64], phi: &[C64]) -> ComplexMatrix {
    let n = t.base_dim();
    let tm = t.mat();
    ComplexMatrix::from_fn(n, n, |x, y| {
        let mut acc = C64::new(0.0, 0.0);
        for (a, pa) in psi.iter().enumerate() {
            if *pa == C64::new(0.0, 0.0) {
                continue;
            }
            for (b, pb) in phi.iter().enumerate() {
                acc += pa.conj() * pb * tm[(a * n + x, y * n + b)];
            }
        }
        acc
    })
}

pub fn extract_v(t: &BipartiteOp, psi1: &[C64], psi2: &[C64]) -> Result<ComplexMatrix> {
    let n = t.base_dim();
    if psi1.len() != n || psi2.len() != n {
        return Err(shape_err(
            format!("vectors of length {n}"),
            format!("lengths {} and {}", psi1.len(), psi2.len()),
        ));
    }
    Ok((&contract(t, psi1, psi2) + &contract(t, psi2, psi1)).scale_real(0.5))
}

/// `V_ψ(T) = V_{ψ,ψ}(T)`.
pub fn extract_v_diagonal(t: &BipartiteOp, psi: &[C64]) -> Result<ComplexMatrix> {
    extract_v(t, psi, psi)
}

/// An `R`-bilinear map `V : C^N × C^N → B(C^N)`, stored through its values on
/// the real basis `{e_a, i e_a}` of `C^N` in each slot.
#[derive(Debug, Clone, PartialEq)]
pub struct EndoFamily {
    base_dim: usize,
    /// `blocks[a * N + b] = [V(e_a, e_b), V(ie_a, e_b), V(e_a, ie_b), V(ie_a, ie_b)]`
    blocks: Vec<[ComplexMatrix; 4]>,
}

impl EndoFamily {
    /// Samples `f` on the real basis pairs. `f` is assumed `R`-bilinear.
    pub fn from_fn(n: usize, f: impl Fn(&[C64], &[C64]) -> ComplexMatrix) -> Self {
        let mut blocks = Vec::with_capacity(n * n);
        for a in 0..n {
            let ea = basis_vector(n, a);
            let iea: Vec<C64> = ea.iter().map(|z| z * I).collect();
            for b in 0..n {
                let eb = basis_vector(n, b);
                let ieb: Vec<C64> = eb.iter().map(|z| z * I).collect();
                blocks.push([f(&ea, &eb), f(&iea, &eb), f(&ea, &ieb), f(&iea, &ieb)]);
            }
        }
        Self { base_dim: n, blocks }
    }

    /// The family `(ψ₁, ψ₂) ↦ V_{ψ₁,ψ₂}(T)`.
    pub fn from_operator(t: &BipartiteOp) -> Self {
        Self::from_fn(t.base_dim(), |p, q| extract_v(t, p, q).expect("matching dimensions"))
    }

    pub fn zero(n: usize) -> Self {
        Self::from_fn(n, |_, _| ComplexMatrix::zeros(n, n))
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn block(&self, a: usize, b: usize) -> &[ComplexMatrix; 4] {
        &self.blocks[a * self.base_dim + b]
    }

    /// `V(ψ₁, ψ₂)` by `R`-bilinear extension.
    pub fn eval(&self, psi1: &[C64], psi2: &[C64]) -> ComplexMatrix {
        let n = self.base_dim;
        let mut out = ComplexMatrix::zeros(n, n);
        for (a, p) in psi1.iter().enumerate().take(n) {
            let (x1, y1) = (p.re, p.im);
            for (b, q) in psi2.iter().enumerate().take(n) {
                let (x2, y2) = (q.re, q.im);
                let blk = self.block(a, b);
                for (coef, m) in [(x1 * x2, &blk[0]), (y1 * x2, &blk[1]), (x1 * y2, &blk[2]), (y1 * y2, &blk[3])] {
                    if coef != 0.0 {
                        out = &out + &m.scale_real(coef);
                    }
                }
            }
        }
        out
    }

    /// Largest violation of `V(iψ₁, ψ₂) = −V(ψ₁, iψ₂)` and of symmetry,
    /// relative to `max(1, max‖block‖)`.
    pub fn invariant_residuals(&self) -> (f64, f64) {
        let n = self.base_dim;
        let scale = self
            .blocks
            .iter()
            .flat_map(|b| b.iter().map(ComplexMatrix::frobenius_norm))
            .fold(1.0, f64::max);
        let mut bilinear: f64 = 0.0;
        let mut symmetric: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let ab = self.block(a, b);
                let ba = self.block(b, a);
                bilinear = bilinear.max((&ab[1] + &ab[2]).frobenius_norm());
                // V(ie_a, ie_b) = −V(e_a, i·i e_b) = V(e_a, e_b)
                bilinear = bilinear.max(ab[3].distance(&ab[0]));
                symmetric = symmetric.max(ab[0].distance(&ba[0]));
                symmetric = symmetric.max(ab[1].distance(&ba[2]));
            }
        }
        (bilinear / scale, symmetric / scale)
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let (bilinear, symmetric) = self.invariant_residuals();
        if bilinear > tol {
            return Err(Error::InvariantViolation(format!(
                "V(iψ₁, ψ₂) = −V(ψ₁, iψ₂) (residual {bilinear:.3e})"
            )));
        }
        if symmetric > tol {
            return Err(Error::InvariantViolation(format!(
                "V(ψ₁, ψ₂) = V(ψ₂, ψ₁) (residual {symmetric:.3e})"
            )));
        }
        Ok(())
    }

    /// Worst endomorphism residual over the stored values.
    pub fn endomorphism_residual(&self, h: &StandardSubspace, s: &Involution) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.iter())
            .map(|v| {
                let r = is_endomorphism(v, h, s);
                r.geometric_residual.max(r.algebraic_residual)
            })
            .fold(0.0, f64::max)
    }
}

/// The unique `T` with `⟨ψ₁ ⊗ ξ, T(η ⊗ ψ₂)⟩ = ⟨ξ, (V(ψ₁,ψ₂) + iV(iψ₁,ψ₂)) η⟩`.
pub fn reconstruct_t(fam: &EndoFamily) -> Result<BipartiteOp> {
    reconstruct_t_with(fam, crate::tol::Tolerances::default().scaled(fam.base_dim()))
}

pub fn reconstruct_t_with(fam: &EndoFamily, tol: f64) -> Result<BipartiteOp> {
    fam.validate(tol)?;
    let n = fam.base_dim;
    let mut t = ComplexMatrix::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            let blk = fam.block(a, b);
            let form = &blk[0] + &blk[1].scale(I);
            for x in 0..n {
                for y in 0..n {
                    t[(a * n + x, y * n + b)] = form[(x, y)];
                }
            }
        }
    }
    BipartiteOp::with_base_dim(t, n)
}

/// Test vectors for the diagonal family: basis vectors, pairwise sums, and
/// sums with `i` times a basis vector. Enough to polarize `V(ψ₁, ψ₂)`.
pub fn polarization_vectors(n: usize) -> Vec<Vec<C64>> {
    let mut out = Vec::new();
    for a in 0..n {
        out.push(basis_vector(n, a));
        for b in a + 1..n {
            let mut v = basis_vector(n, a);
            v[b] = C64::new(1.0, 0.0);
            out.push(v.clone());
            v[b] = I;
            out.push(v);
        }
    }
    out
}

/// `max_ψ` endomorphism residual of `V_ψ(T)` over [`polarization_vectors`].
pub fn endomorphism_family_residual(t: &BipartiteOp, h: &StandardSubspace, s: &Involution) -> f64 {
    polarization_vectors(t.base_dim())
        .iter()
        .map(|psi| {
            let v = extract_v_diagonal(t, psi).expect("matching dimensions");
            let r = is_endomorphism(&v, h, s);
            r.geometric_residual.max(r.algebraic_residual)
        })
        .fold(0.0, f64::max)
}

/// `T = (Σ_k P_k ⊗ V_k) F` for a resolution of the identity `{P_k}` and
/// endomorphisms `V_k` of `H`.
pub fn spectral_sum_twist(
    e_projs: &[ComplexMatrix],
    v_ops: &[ComplexMatrix],
    h: &StandardSubspace,
    s: &Involution,
) -> Result<BipartiteOp> {
    let n = s.dim();
    if e_projs.len() != v_ops.len() {
        return Err(Error::DimensionMismatch {
            expected: e_projs.len(),
            found: v_ops.len(),
        });
    }
    let tol = s.tolerances().scaled(n);
    let id = ComplexMatrix::identity(n);
    let mut total = ComplexMatrix::zeros(n, n);
    for (k, p) in e_projs.iter().enumerate() {
        if p.shape() != (n, n) {
            return Err(shape_err(format!("{n}x{n} projection"), format!("{}x{}", p.rows(), p.cols())));
        }
        let idem = (p * p).distance(p);
        let herm = p.hermitian_residual();
        if idem > tol || herm > tol {
            return Err(Error::NotAResolution(format!(
                "P_{k} is not an orthogonal projection (residual {:.3e})",
                idem.max(herm)
            )));
        }
        for (l, q) in e_projs.iter().enumerate().skip(k + 1) {
            let r = (p * q).frobenius_norm();
            if r > tol {
                return Err(Error::NotAResolution(format!(
                    "P_{k} P_{l} ≠ 0 (residual {r:.3e})"
                )));
            }
        }
        total = &total + p;
    }
    let r = total.distance(&id);
    if r > tol {
        return Err(Error::NotAResolution(format!("Σ P_k ≠ 1 (residual {r:.3e})")));
    }
    let mut sum = ComplexMatrix::zeros(n * n, n * n);
    for (index, (p, v)) in e_projs.iter().zip(v_ops).enumerate() {
        if v.shape() != (n, n) {
            return Err(shape_err(format!("{n}x{n} operator"), format!("{}x{}", v.rows(), v.cols())));
        }
        let test = is_endomorphism(v, h, s);
        if !test.is_endomorphism {
            return Err(Error::NotEndomorphism {
                index,
                residual: test.geometric_residual.max(test.algebraic_residual),
            });
        }
        sum = &sum + &kron(p, v);
    }
    BipartiteOp::with_base_dim(&sum * &crate::tensor::flip(n), n)
}

/// Round trip `T → {V_{e_a,e_b}} → T`, the uniqueness half of the
/// correspondence, and the crossing verdict on both sides.
pub fn endomorphism_checks(t: &BipartiteOp, s: &Involution) -> Result<crate::report::VerificationReport> {
    use crate::report::{Check, VerificationReport};
    if t.base_dim() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: t.base_dim(),
        });
    }
    let n = s.dim();
    let tol = s.tolerances().scaled(n * n);
    let h = crate::modular::standard_subspace(s)?;
    let mut report = VerificationReport::new("endomorphism");
    let fam = EndoFamily::from_operator(t);
    let back = reconstruct_t(&fam)?;
    report.record("round_trip", back.mat().rel_distance(t.mat()), tol);

    let symmetric = is_crossing_symmetric(s, t);
    let endo = endomorphism_family_residual(t, &h, s);
    let endo_tol = tol * s.s().mat().frobenius_norm().max(1.0).powi(2);
    let agree = symmetric.symmetric == (endo <= endo_tol);
    report.push(
        Check::new("characterization_agrees", if agree { 0.0 } else { 1.0 }, 0.0)
            .param("crossing_residual", symmetric.residual)
            .param("endomorphism_residual", endo),
    );
    Ok(report)
}
