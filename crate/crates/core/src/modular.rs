//! Antilinear involutions, their polar decomposition and standard subspaces.
//!
//! An involution `S` on `C^N` factors as `S = JΔ^{1/2}` with `J` an
//! antiunitary involution and `Δ = S*S` positive; the modular relation
//! `JΔJ = Δ⁻¹` ties the two together. `H = ker(S − 1)` is a real subspace of
//! real dimension `N` with `H ∩ iH = {0}` and `H + iH = C^N`.

use crate::error::{Error, Result};
use crate::tensor::matrix::{basis_vector, inner, kron_vec, vec_distance};
use crate::tensor::nullspace::real_nullspace;
use crate::tensor::spectral::herm_power_with;
use crate::tensor::{AntilinearOp, ComplexMatrix, C64, I, ONE};
use crate::tol::Tolerances;

#[derive(Debug, Clone)]
pub struct Involution {
    s: AntilinearOp,
    j: AntilinearOp,
    delta: ComplexMatrix,
    delta_half: ComplexMatrix,
    delta_neg_half: ComplexMatrix,
    /// Columns are an orthonormal basis of `J`-fixed vectors.
    j_basis: ComplexMatrix,
    tol: Tolerances,
}

impl Involution {
    /// Entrywise conjugation on `C^n`: `J = S`, `Δ = 1`.
    pub fn conjugation(n: usize) -> Self {
        involution_from_parts(AntilinearOp::conjugation(n), ComplexMatrix::identity(n))
            .expect("conjugation is a valid involution")
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    pub fn s(&self) -> &AntilinearOp {
        &self.s
    }

    pub fn s_adjoint(&self) -> AntilinearOp {
        self.s.adjoint()
    }

    pub fn j(&self) -> &AntilinearOp {
        &self.j
    }

    pub fn delta(&self) -> &ComplexMatrix {
        &self.delta
    }

    pub fn delta_half(&self) -> &ComplexMatrix {
        &self.delta_half
    }

    pub fn delta_neg_half(&self) -> &ComplexMatrix {
        &self.delta_neg_half
    }

    /// `Δ^z` for complex `z`.
    pub fn delta_power(&self, z: C64) -> ComplexMatrix {
        herm_power_with(&self.delta, z, &self.tol).expect("Δ validated positive at construction")
    }

    pub fn delta_power_real(&self, a: f64) -> ComplexMatrix {
        self.delta_power(C64::new(a, 0.0))
    }

    /// `Δ^{it}`
    pub fn modular_group(&self, t: f64) -> ComplexMatrix {
        self.delta_power(C64::new(0.0, t))
    }

    pub fn j_basis(&self) -> &ComplexMatrix {
        &self.j_basis
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    /// The involution with the same `J` and `Δ = 1`.
    pub fn antiunitary_part(&self) -> Involution {
        Involution {
            s: self.j.clone(),
            j: self.j.clone(),
            delta: ComplexMatrix::identity(self.dim()),
            delta_half: ComplexMatrix::identity(self.dim()),
            delta_neg_half: ComplexMatrix::identity(self.dim()),
            j_basis: self.j_basis.clone(),
            tol: self.tol,
        }
    }

    pub fn is_trivial_delta(&self) -> bool {
        self.delta.distance(&ComplexMatrix::identity(self.dim())) <= self.tol.scaled(self.dim())
    }

    /// Residuals of `S² = 1`, `JΔJ = Δ⁻¹` and `S = JΔ^{1/2}`.
    pub fn invariant_residuals(&self) -> [f64; 3] {
        let s2 = self.s.involution_residual();
        let inv = self.delta.inverse().expect("Δ positive");
        let modular = self.j.sandwich(&self.delta).distance(&inv);
        let polar = self.j.after_linear(&self.delta_half).mat().distance(self.s.mat());
        [s2, modular, polar]
    }
}

/// Relative residual with a unit floor.
fn rel(residual: f64, scale: f64) -> f64 {
    residual / scale.max(1.0)
}

pub fn involution_from_parts(j: AntilinearOp, delta: ComplexMatrix) -> Result<Involution> {
    involution_from_parts_with(j, delta, Tolerances::default())
}

pub fn involution_from_parts_with(j: AntilinearOp, delta: ComplexMatrix, tol: Tolerances) -> Result<Involution> {
    let n = j.dim();
    if delta.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: delta.rows(),
        });
    }
    let bound = tol.scaled(n);
    let residual = j.unitarity_residual();
    if residual > bound {
        return Err(Error::NotAntiunitary { residual });
    }
    let residual = j.involution_residual();
    if residual > bound {
        return Err(Error::NotInvolution { residual });
    }
    let delta_half = herm_power_with(&delta, C64::new(0.5, 0.0), &tol)?;
    let delta_neg_half = herm_power_with(&delta, C64::new(-0.5, 0.0), &tol)?;
    let inv = &delta_neg_half * &delta_neg_half;
    let residual = rel(j.sandwich(&delta).distance(&inv), inv.frobenius_norm());
    if residual > bound {
        return Err(Error::InvalidModularRelation { residual });
    }
    let s = j.after_linear(&delta_half);
    let residual = rel(s.involution_residual(), s.mat().frobenius_norm().powi(2));
    if residual > bound {
        return Err(Error::NotInvolution { residual });
    }
    let j_basis = j_fixed_basis(&j, &tol)?;
    Ok(Involution {
        s,
        j,
        delta,
        delta_half,
        delta_neg_half,
        j_basis,
        tol,
    })
}

pub fn involution_from_matrix(s: AntilinearOp) -> Result<Involution> {
    involution_from_matrix_with(s, Tolerances::default())
}

pub fn involution_from_matrix_with(s: AntilinearOp, tol: Tolerances) -> Result<Involution> {
    let n = s.dim();
    let bound = tol.scaled(n);
    let residual = rel(s.involution_residual(), s.mat().frobenius_norm().powi(2));
    if residual > bound {
        return Err(Error::NotInvolution { residual });
    }
    // Δ = S*S, linear with matrix M_Sᵀ conj(M_S)
    let delta = s.adjoint().compose(&s);
    let delta = (&delta + &delta.adjoint()).scale_real(0.5);
    let delta_half = herm_power_with(&delta, C64::new(0.5, 0.0), &tol)?;
    let delta_neg_half = herm_power_with(&delta, C64::new(-0.5, 0.0), &tol)?;
    let j = s.after_linear(&delta_neg_half);
    let residual = j.unitarity_residual();
    if residual > bound {
        return Err(Error::NotAntiunitary { residual });
    }
    let rebuilt = j.after_linear(&delta_half);
    let residual = rel(rebuilt.mat().distance(s.mat()), s.mat().frobenius_norm());
    if residual > bound {
        return Err(Error::NotInvolution { residual });
    }
    let j_basis = j_fixed_basis(&j, &tol)?;
    Ok(Involution {
        s,
        j,
        delta,
        delta_half,
        delta_neg_half,
        j_basis,
        tol,
    })
}

/// Orthonormal basis of `J`-fixed vectors.
///
/// Candidates `e_k + Je_k` and `i(e_k − Je_k)` are all `J`-fixed and span
/// `C^N` over `C`; Gram–Schmidt keeps them `J`-fixed because inner products
/// between `J`-fixed vectors are real.
fn j_fixed_basis(j: &AntilinearOp, tol: &Tolerances) -> Result<ComplexMatrix> {
    let n = j.dim();
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(n);
    for k in 0..n {
        let e = basis_vector(n, k);
        let je = j.apply(&e);
        let plus: Vec<C64> = e.iter().zip(&je).map(|(a, b)| a + b).collect();
        let minus: Vec<C64> = e.iter().zip(&je).map(|(a, b)| I * (a - b)).collect();
        for mut v in [plus, minus] {
            if basis.len() == n {
                break;
            }
            for _ in 0..2 {
                for f in &basis {
                    let c = inner(f, &v).re;
                    for (x, y) in v.iter_mut().zip(f) {
                        *x -= c * y;
                    }
                }
            }
            let nv = crate::tensor::norm(&v);
            if nv > 1e-6 {
                basis.push(v.iter().map(|x| x / nv).collect());
            }
        }
    }
    if basis.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: basis.len(),
        });
    }
    let w = ComplexMatrix::from_columns(&basis);
    let residual = (&w.adjoint() * &w).distance(&ComplexMatrix::identity(n));
    if residual > tol.scaled(n) {
        return Err(Error::NotAntiunitary { residual });
    }
    Ok(w)
}

#[derive(Debug, Clone)]
pub struct StandardSubspace {
    /// Real-orthonormal basis (w.r.t. `Re⟨·,·⟩`) of `H`.
    pub real_basis: Vec<Vec<C64>>,
    /// Smallest singular value of the basis matrix; small values mean `H`
    /// is close to containing a complex line.
    pub conditioning: f64,
}

impl StandardSubspace {
    pub fn basis_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_columns(&self.real_basis)
    }

    /// The Tomita operator `S(h₁ + ih₂) = h₁ − ih₂`, `M_S = H conj(H⁻¹)`.
    pub fn tomita(&self) -> Result<AntilinearOp> {
        let h = self.basis_matrix();
        let hinv = h.inverse()?;
        Ok(AntilinearOp::new(&h * &hinv.conj()))
    }

    /// Residual of projecting `y` onto `span_ℝ(H)`.
    pub fn projection_residual(&self, y: &[C64]) -> f64 {
        let mut r = y.to_vec();
        for h in &self.real_basis {
            let c = inner(h, y).re;
            for (x, b) in r.iter_mut().zip(h) {
                *x -= c * b;
            }
        }
        crate::tensor::norm(&r)
    }
}

pub fn standard_subspace(s: &Involution) -> Result<StandardSubspace> {
    let n = s.dim();
    let ms = s.s().mat().clone();
    let ns = real_nullspace(n, 1, s.tol.rank_rel, |x| {
        let sx = &ms * &x.conj();
        vec![&sx - x]
    });
    if ns.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: ns.dim(),
        });
    }
    let real_basis: Vec<Vec<C64>> = ns.basis.iter().map(|b| b.col(0)).collect();
    let m = ComplexMatrix::from_columns(&real_basis);
    let conditioning = m
        .to_nalgebra()
        .singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    Ok(StandardSubspace {
        real_basis,
        conditioning,
    })
}

/// `ξ_S = Σ_n e_n ⊗ S e_n` and `P_S = |ξ_S⟩⟨ξ_S|`.
pub fn xi_and_ps(s: &Involution) -> (Vec<C64>, ComplexMatrix) {
    let xi = xi_in_basis(s, &ComplexMatrix::identity(s.dim()));
    let ps = ComplexMatrix::outer(&xi, &xi);
    (xi, ps)
}

/// `Σ_n u_n ⊗ S u_n` over the columns of a unitary `u`.
pub fn xi_in_basis(s: &Involution, u: &ComplexMatrix) -> Vec<C64> {
    let n = s.dim();
    let mut xi = vec![C64::new(0.0, 0.0); n * n];
    for k in 0..n {
        let e = u.col(k);
        let se = s.s().apply(&e);
        for (x, y) in xi.iter_mut().zip(kron_vec(&e, &se)) {
            *x += y;
        }
    }
    xi
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndomorphismTest {
    pub is_endomorphism: bool,
    /// `Σ_h ‖Vh − proj_H(Vh)‖`, relative to `max(1, ‖V‖)`.
    pub geometric_residual: f64,
    /// `‖SVS − V‖`, relative to `max(1, ‖V‖)`.
    pub algebraic_residual: f64,
    pub tolerance: f64,
}

impl EndomorphismTest {
    pub fn agree(&self) -> bool {
        (self.geometric_residual <= self.tolerance) == (self.algebraic_residual <= self.tolerance)
    }
}

pub fn is_endomorphism(v: &ComplexMatrix, h: &StandardSubspace, s: &Involution) -> EndomorphismTest {
    let n = s.dim();
    assert_eq!(v.shape(), (n, n), "endomorphism candidate must be N x N");
    let scale = v.frobenius_norm().max(1.0);
    let geometric = h
        .real_basis
        .iter()
        .map(|b| h.projection_residual(&v.apply(b)).powi(2))
        .sum::<f64>()
        .sqrt()
        / scale;
    let algebraic = s.s().sandwich(v).distance(v) / scale;
    let tolerance = s.tol.scaled(n) * s.s().mat().frobenius_norm().max(1.0).powi(2);
    EndomorphismTest {
        is_endomorphism: geometric <= tolerance && algebraic <= tolerance,
        geometric_residual: geometric,
        algebraic_residual: algebraic,
        tolerance,
    }
}

/// Real basis of all endomorphisms of `H`, i.e. solutions of `SVS = V`.
pub fn endomorphism_basis(s: &Involution) -> Vec<ComplexMatrix> {
    let n = s.dim();
    real_nullspace(n, n, s.tol.rank_rel, |v| vec![&s.s().sandwich(v) - v]).basis
}

/// `Sv` for a vector, convenience for callers that hold an [`Involution`].
pub fn apply_s(s: &Involution, v: &[C64]) -> Vec<C64> {
    s.s().apply(v)
}

pub fn is_fixed_by_s(s: &Involution, v: &[C64]) -> bool {
    vec_distance(&s.s().apply(v), v) <= s.tol.scaled(s.dim()) * crate::tensor::norm(v).max(1.0)
}

/// Swap-conjugation on `C²`, `J(a, b) = (b̄, ā)`.
pub fn swap_conjugation() -> AntilinearOp {
    AntilinearOp::new(ComplexMatrix::from_rows(&[
        &[C64::new(0.0, 0.0), ONE],
        &[ONE, C64::new(0.0, 0.0)],
    ]))
}
