//! The crossing map on operators of `C^N ⊗ C^N`.
//!
//! For an involution `S`, `Cross_S(T)` is characterized by
//!
//! ```text
//! ⟨φ₁ ⊗ φ₂, Cross_S(T)(ψ₁ ⊗ ψ₂)⟩ = ⟨φ₂ ⊗ S*ψ₂, T(Sφ₁ ⊗ ψ₁)⟩
//! ```
//!
//! Two independent implementations are provided. [`cross_oracle`] evaluates
//! this on basis vectors; [`cross_fast`] rotates indices in a `J`-real basis
//! and then dresses with `Δ^{±1/2}`. They are compared in the tests and
//! must not be merged.

use crate::error::{shape_err, Result};
use crate::modular::Involution;
use crate::report::{Check, VerificationReport};
use crate::tensor::matrix::{flip, inner, kron, kron_vec, norm};
use crate::tensor::{ComplexMatrix, C64};

/// An operator on `C^N ⊗ C^N`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteOp {
    mat: ComplexMatrix,
    base_dim: usize,
}

impl BipartiteOp {
    /// Wraps an `N² x N²` matrix; `N` is inferred.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let d = mat.rows();
        let n = (d as f64).sqrt().round() as usize;
        if !mat.is_square() || n * n != d {
            return Err(shape_err(
                "square matrix of size N² x N²",
                format!("{}x{}", mat.rows(), mat.cols()),
            ));
        }
        Ok(Self { mat, base_dim: n })
    }

    pub fn with_base_dim(mat: ComplexMatrix, n: usize) -> Result<Self> {
        if mat.shape() != (n * n, n * n) {
            return Err(shape_err(
                format!("{0}x{0}", n * n),
                format!("{}x{}", mat.rows(), mat.cols()),
            ));
        }
        Ok(Self { mat, base_dim: n })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(n * n),
            base_dim: n,
        }
    }

    pub fn flip(n: usize) -> Self {
        Self { mat: flip(n), base_dim: n }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            mat: ComplexMatrix::zeros(n * n, n * n),
            base_dim: n,
        }
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn adjoint(&self) -> Self {
        Self {
            mat: self.mat.adjoint(),
            base_dim: self.base_dim,
        }
    }

    /// `T^{jl}_{ik} = ⟨e_j ⊗ e_l, T(e_i ⊗ e_k)⟩`
    pub fn element(&self, j: usize, l: usize, i: usize, k: usize) -> C64 {
        let n = self.base_dim;
        self.mat[(j * n + l, i * n + k)]
    }

    fn map(&self, f: impl FnOnce(&ComplexMatrix) -> ComplexMatrix) -> Self {
        Self {
            mat: f(&self.mat),
            base_dim: self.base_dim,
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map(|m| m.scale(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.map(|m| m + &other.mat)
    }
}

fn check_dims(s: &Involution, t: &BipartiteOp) -> Result<()> {
    if s.dim() != t.base_dim() {
        return Err(shape_err(
            format!("operator on C^{0} ⊗ C^{0}", s.dim()),
            format!("operator on C^{0} ⊗ C^{0}", t.base_dim()),
        ));
    }
    Ok(())
}

/// `Cross_S(T)` straight from the defining relation, `O(N⁶)`.
pub fn cross_oracle(s: &Involution, t: &BipartiteOp) -> Result<BipartiteOp> {
    check_dims(s, t)?;
    let n = s.dim();
    let ms = s.s().mat();
    let tm = t.mat();
    let mut out = ComplexMatrix::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    // ⟨e_b ⊗ S*e_d, T(Se_a ⊗ e_c)⟩ with Se_a = M_S[:, a], S*e_d = M_S[d, :]
                    let mut acc = C64::new(0.0, 0.0);
                    for m in 0..n {
                        let y = ms[(d, m)].conj();
                        if y == C64::new(0.0, 0.0) {
                            continue;
                        }
                        for p in 0..n {
                            acc += y * tm[(b * n + m, p * n + c)] * ms[(p, a)];
                        }
                    }
                    out[(a * n + b, c * n + d)] = acc;
                }
            }
        }
    }
    Ok(BipartiteOp { mat: out, base_dim: n })
}

/// `Cross_J(T)` for the antiunitary part `J` of `s`: index rotation
/// `Cross_J(T)^{ij}_{kl} = T^{jl}_{ik}` in a `J`-fixed orthonormal basis.
pub fn cross_antiunitary(s: &Involution, t: &BipartiteOp) -> Result<BipartiteOp> {
    check_dims(s, t)?;
    let n = s.dim();
    let w = s.j_basis();
    let ww = kron(w, w);
    let t_real = &(&ww.adjoint() * t.mat()) * &ww;
    let rotated = ComplexMatrix::from_fn(n * n, n * n, |row, col| {
        let (i, j) = (row / n, row % n);
        let (k, l) = (col / n, col % n);
        t_real[(j * n + l, i * n + k)]
    });
    Ok(BipartiteOp {
        mat: &(&ww * &rotated) * &ww.adjoint(),
        base_dim: n,
    })
}

/// `Cross_S(T) = (Δ^{1/2} ⊗ 1) Cross_J(T) (1 ⊗ Δ^{-1/2})`.
pub fn cross_fast(s: &Involution, t: &BipartiteOp) -> Result<BipartiteOp> {
    let cj = cross_antiunitary(s, t)?;
    let n = s.dim();
    let id = ComplexMatrix::identity(n);
    let left = kron(s.delta_half(), &id);
    let right = kron(&id, s.delta_neg_half());
    Ok(BipartiteOp {
        mat: &(&left * cj.mat()) * &right,
        base_dim: n,
    })
}

/// `Cross_S⁻¹(T) = Cross_S(T*)*`.
pub fn cross_inverse(s: &Involution, t: &BipartiteOp) -> Result<BipartiteOp> {
    Ok(cross_fast(s, &t.adjoint())?.adjoint())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryTest {
    pub symmetric: bool,
    /// `‖Cross_S(T) − T*‖_F / max(1, ‖T‖_F)`
    pub residual: f64,
    pub tolerance: f64,
}

pub fn crossing_residual(s: &Involution, t: &BipartiteOp) -> Result<f64> {
    let c = cross_fast(s, t)?;
    Ok(c.mat().distance(&t.mat().adjoint()) / t.mat().frobenius_norm().max(1.0))
}

pub fn is_crossing_symmetric(s: &Involution, t: &BipartiteOp) -> SymmetryTest {
    let tolerance = s.tolerances().scaled(s.dim() * s.dim());
    let residual = crossing_residual(s, t).unwrap_or(f64::INFINITY);
    SymmetryTest {
        symmetric: residual <= tolerance,
        residual,
        tolerance,
    }
}

/// `Ŝ`, `Ĵ` and `Δ̂_α` on operators of `C^N ⊗ C^N`.
#[derive(Debug, Clone, Copy)]
pub struct HatOperators<'a> {
    s: &'a Involution,
}

pub fn hat_operators(s: &Involution) -> HatOperators<'_> {
    HatOperators { s }
}

impl HatOperators<'_> {
    /// `Ŝ(T) = Cross_S(T)*`
    pub fn s_hat(&self, t: &BipartiteOp) -> BipartiteOp {
        cross_fast(self.s, t).expect("dimension checked by caller").adjoint()
    }

    /// `Ĵ(T) = Cross_J(T)*`
    pub fn j_hat(&self, t: &BipartiteOp) -> BipartiteOp {
        cross_antiunitary(self.s, t).expect("dimension checked by caller").adjoint()
    }

    /// `Δ̂_α(T) = (1 ⊗ Δ^α) T (Δ^{-α} ⊗ 1)`
    pub fn delta_hat(&self, alpha: f64, t: &BipartiteOp) -> BipartiteOp {
        let id = ComplexMatrix::identity(self.s.dim());
        let left = kron(&id, &self.s.delta_power_real(alpha));
        let right = kron(&self.s.delta_power_real(-alpha), &id);
        t.map(|m| &(&left * m) * &right)
    }

    /// Matrix `M` of the antilinear map `Ŝ` on row-major `vec(T)`:
    /// `vec Ŝ(T) = M conj(vec T)`.
    pub fn s_hat_matrix(&self) -> ComplexMatrix {
        let n = self.s.dim();
        let d = n * n;
        let mut columns = Vec::with_capacity(d * d);
        for k in 0..d * d {
            let mut e = ComplexMatrix::zeros(d, d);
            e[(k / d, k % d)] = C64::new(1.0, 0.0);
            let e = BipartiteOp { mat: e, base_dim: n };
            columns.push(self.s_hat(&e).into_matrix().into_data());
        }
        ComplexMatrix::from_columns(&columns)
    }

    /// `Ŝ*Ŝ` as a linear map on `vec(T)`, with the adjoint taken for the
    /// Hilbert–Schmidt inner product.
    pub fn s_hat_star_s_hat(&self) -> ComplexMatrix {
        let m = self.s_hat_matrix();
        &m.transpose() * &m.conj()
    }

    /// Matrix of `Δ̂_α` on `vec(T)`.
    pub fn delta_hat_matrix(&self, alpha: f64) -> ComplexMatrix {
        let n = self.s.dim();
        let d = n * n;
        let mut columns = Vec::with_capacity(d * d);
        for k in 0..d * d {
            let mut e = ComplexMatrix::zeros(d, d);
            e[(k / d, k % d)] = C64::new(1.0, 0.0);
            let e = BipartiteOp { mat: e, base_dim: n };
            columns.push(self.delta_hat(alpha, &e).into_matrix().into_data());
        }
        ComplexMatrix::from_columns(&columns)
    }
}

/// `(Δ^α ⊗ 1) T (1 ⊗ Δ^{-α})`
pub fn delta_out(s: &Involution, alpha: f64, t: &BipartiteOp) -> BipartiteOp {
    let id = ComplexMatrix::identity(s.dim());
    let left = kron(&s.delta_power_real(alpha), &id);
    let right = kron(&id, &s.delta_power_real(-alpha));
    t.map(|m| &(&left * m) * &right)
}

/// `(1 ⊗ Δ^α) T (Δ^{-α} ⊗ 1)`
pub fn delta_in(s: &Involution, alpha: f64, t: &BipartiteOp) -> BipartiteOp {
    hat_operators(s).delta_hat(alpha, t)
}

/// `Cross_S²(T) = F (S* ⊗ S*) T* (S* ⊗ S*) F`, as a matrix.
pub fn cross_squared_closed_form(s: &Involution, t: &BipartiteOp) -> BipartiteOp {
    let n = s.dim();
    let mst = s.s().mat().transpose();
    let k = kron(&mst, &mst);
    let f = flip(n);
    // antilinear K ∘ linear T* ∘ antilinear K is linear: K conj(T*) conj(K)
    let inner_part = &(&k * &t.mat().adjoint().conj()) * &k.conj();
    t.map(|_| &(&f * &inner_part) * &f)
}

pub const DEFAULT_ALPHAS: [f64; 3] = [0.37, -0.81, 1.5];

pub fn cross_power_checks(s: &Involution, t: &BipartiteOp) -> Result<VerificationReport> {
    cross_power_checks_with(s, t, &DEFAULT_ALPHAS)
}

pub fn cross_power_checks_with(s: &Involution, t: &BipartiteOp, alphas: &[f64]) -> Result<VerificationReport> {
    check_dims(s, t)?;
    let n = s.dim();
    let tol = s.tolerances().scaled(n * n);
    let mut report = VerificationReport::new("crossing-powers");

    let c1 = cross_fast(s, t)?;
    let c2 = cross_fast(s, &c1)?;
    let c3 = cross_fast(s, &c2)?;
    let c4 = cross_fast(s, &c3)?;
    let dd = kron(s.delta(), s.delta());
    let dd_inv = kron(&s.delta_power_real(-1.0), &s.delta_power_real(-1.0));
    let expected4 = &(&dd * t.mat()) * &dd_inv;
    report.record("cross_fourth_power", c4.mat().rel_distance(&expected4), tol);

    let expected2 = cross_squared_closed_form(s, t);
    report.record("cross_square", c2.mat().rel_distance(expected2.mat()), tol);

    let back = cross_inverse(s, &c1)?;
    report.record("cross_inverse", back.mat().rel_distance(t.mat()), tol);

    for &alpha in alphas {
        let lhs = cross_fast(s, &delta_in(s, alpha, t))?;
        let rhs = delta_out(s, alpha, &c1);
        report.push(Check::new("exchange_in_out", lhs.mat().rel_distance(rhs.mat()), tol).param("alpha", alpha));
        let lhs = cross_fast(s, &delta_out(s, alpha, t))?;
        let rhs = delta_in(s, alpha, &c1);
        report.push(Check::new("exchange_out_in", lhs.mat().rel_distance(rhs.mat()), tol).param("alpha", alpha));
    }
    Ok(report)
}

/// The two sides of the boundary condition at `t + i/2`.
pub fn kms_sides(s: &Involution, t: &BipartiteOp, time: f64, psi: &[Vec<C64>; 4]) -> Result<(C64, C64, f64)> {
    check_dims(s, t)?;
    let n = s.dim();
    for p in psi {
        if p.len() != n {
            return Err(shape_err(format!("vector of length {n}"), format!("length {}", p.len())));
        }
    }
    let [p1, p2, p3, p4] = psi;
    let up = s.delta_power(C64::new(0.5, time));
    let down = s.delta_power(C64::new(-0.5, time));
    let a = up.apply(p2);
    let b = down.apply(p3);
    let lhs = inner(&kron_vec(p1, &a), &t.mat().apply(&kron_vec(&b, p4)));

    let cross = cross_fast(s, t)?;
    let id = ComplexMatrix::identity(n);
    let left = kron(&s.modular_group(-time), &id);
    let right = kron(&id, &s.modular_group(time));
    let dressed = &(&left * cross.mat()) * &right;
    let jp2 = s.j().apply(p2);
    let jp3 = s.j().apply(p3);
    let rhs = inner(&kron_vec(&jp3, p1), &dressed.apply(&kron_vec(p4, &jp2)));

    let scale = t.mat().operator_norm() * norm(p1) * norm(&a) * norm(&b) * norm(p4);
    Ok((lhs, rhs, scale))
}

pub fn kms_boundary_check(s: &Involution, t: &BipartiteOp, times: &[f64], psi: &[Vec<C64>; 4]) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("kms");
    let tol = s.tolerances().scaled(s.dim() * s.dim());
    for &time in times {
        let (lhs, rhs, scale) = kms_sides(s, t, time, psi)?;
        let residual = (lhs - rhs).norm() / scale.max(f64::MIN_POSITIVE);
        report.push(Check::new("kms_boundary", residual, tol).param("t", time));
    }
    Ok(report)
}

/// Basic crossing properties of a single `T`: symmetry, inverse round trip,
/// and involutivity of `Ŝ`.
pub fn crossing_basic_checks(s: &Involution, t: &BipartiteOp) -> Result<VerificationReport> {
    check_dims(s, t)?;
    let n = s.dim();
    let tol = s.tolerances().scaled(n * n);
    let mut report = VerificationReport::new("crossing-basic");
    let fast = cross_fast(s, t)?;
    let oracle = cross_oracle(s, t)?;
    report.record("oracle_agreement", fast.mat().rel_distance(oracle.mat()), tol);
    report.record("crossing_symmetry", crossing_residual(s, t)?, tol);
    report.record(
        "inverse_round_trip",
        cross_inverse(s, &fast)?.mat().rel_distance(t.mat()),
        tol,
    );
    let hats = hat_operators(s);
    report.record("s_hat_involution", hats.s_hat(&hats.s_hat(t)).mat().rel_distance(t.mat()), tol);
    Ok(report)
}

/// `‖(T⊗1)(1⊗T)(T⊗1) − (1⊗T)(T⊗1)(1⊗T)‖_F / max(1, ‖T‖_F³)`.
pub fn yang_baxter_residual(t: &BipartiteOp) -> f64 {
    let id = ComplexMatrix::identity(t.base_dim());
    let t1 = kron(t.mat(), &id);
    let t2 = kron(&id, t.mat());
    let lhs = &(&t1 * &t2) * &t1;
    let rhs = &(&t2 * &t1) * &t2;
    lhs.distance(&rhs) / t.mat().frobenius_norm().powi(3).max(1.0)
}

/// `‖(T⊗1)(1⊗T) − (1⊗T)(T⊗1)‖_F / max(1, ‖T‖_F²)`.
pub fn exchange_residual(t: &BipartiteOp) -> f64 {
    let id = ComplexMatrix::identity(t.base_dim());
    let t1 = kron(t.mat(), &id);
    let t2 = kron(&id, t.mat());
    (&t1 * &t2).distance(&(&t2 * &t1)) / t.mat().frobenius_norm().powi(2).max(1.0)
}
