//! Crossing symmetric operators that commute with `U ⊗ U` for a group of
//! unitaries `U`, found by brute force as a real nullspace.
//!
//! The orthogonal group `O(N)` appears as the unitaries commuting with an
//! antiunitary involution `J`, i.e. real orthogonal matrices written in a
//! `J`-fixed basis. Its invariant crossing symmetric operators are
//!
//! ```text
//! Δ = 1:         { z·1 + z̄·P_J + x·F : z ∈ C, x ∈ R }   (real dim 3)
//! Δ ≠ 1, N = 2:  { x·F + iy(1 − P_J) : x, y ∈ R }       (real dim 2)
//! Δ ≠ 1, N > 2:  R·F                                    (real dim 1)
//! ```

use rand::Rng;
use serde::Serialize;

use crate::crossing::{cross_fast, crossing_residual, is_crossing_symmetric, BipartiteOp};
use crate::endomorphisms::extract_v_diagonal;
use crate::error::{Error, Result};
use crate::modular::{involution_from_parts, swap_conjugation, xi_and_ps, Involution};
use crate::random::{haar_orthogonal, seeded};
use crate::report::{Check, VerificationReport};
use crate::tensor::matrix::{flip, kron};
use crate::tensor::{real_nullspace, real_orthonormalize, real_span_residual, AntilinearOp, ComplexMatrix, C64, I};
use crate::tol::Tolerances;

/// Unitary generators of a group together with the involution defining the
/// crossing map.
#[derive(Debug, Clone)]
pub struct SymmetryConstraint {
    generators: Vec<ComplexMatrix>,
    involution: Involution,
}

impl SymmetryConstraint {
    pub fn new(generators: Vec<ComplexMatrix>, involution: Involution) -> Result<Self> {
        let n = involution.dim();
        let tol = involution.tolerances().scaled(n);
        for (k, u) in generators.iter().enumerate() {
            if u.shape() != (n, n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: u.rows(),
                });
            }
            let residual = (&u.adjoint() * u).distance(&ComplexMatrix::identity(n));
            if residual > tol {
                return Err(Error::PreconditionFailed(format!(
                    "generator {k} is not unitary (residual {residual:.3e})"
                )));
            }
        }
        Ok(Self { generators, involution })
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.generators
    }

    pub fn involution(&self) -> &Involution {
        &self.involution
    }

    /// Largest `‖[T, U⊗U]‖_F / max(1, ‖T‖_F)` over the generators.
    pub fn commutator_residual(&self, t: &BipartiteOp) -> f64 {
        let scale = t.mat().frobenius_norm().max(1.0);
        self.generators
            .iter()
            .map(|u| t.mat().commutator(&kron(u, u)).frobenius_norm() / scale)
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct InvariantSpace {
    /// Real-orthonormal basis with respect to `Re Tr(A*B)`.
    pub basis: Vec<BipartiteOp>,
    /// The smallest few singular values of the stacked constraint system,
    /// ascending.
    pub smallest_singular_values: Vec<f64>,
    /// Ratio between the smallest retained and largest discarded singular
    /// value.
    pub gap: f64,
}

impl InvariantSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn matrices(&self) -> Vec<ComplexMatrix> {
        self.basis.iter().map(|b| b.mat().clone()).collect()
    }
}

/// Real basis of `{T : Cross_S(T) = T*, [T, U⊗U] = 0 for all generators}`.
pub fn invariant_crossing_space(c: &SymmetryConstraint) -> InvariantSpace {
    let s = &c.involution;
    let n = s.dim();
    let nn = n * n;
    let uu: Vec<ComplexMatrix> = c.generators.iter().map(|u| kron(u, u)).collect();
    let ns = real_nullspace(nn, nn, s.tolerances().rank_rel, |t| {
        let op = BipartiteOp::with_base_dim(t.clone(), n).expect("square of size n²");
        let crossed = cross_fast(s, &op).expect("matching dimensions");
        let mut out = vec![crossed.mat() - &t.adjoint()];
        out.extend(uu.iter().map(|g| t.commutator(g)));
        out
    });
    let mut smallest: Vec<f64> = ns.singular_values.iter().rev().take(ns.dim() + 3).copied().collect();
    smallest.truncate(8);
    InvariantSpace {
        basis: ns
            .basis
            .into_iter()
            .map(|b| BipartiteOp::with_base_dim(b, n).expect("square of size n²"))
            .collect(),
        smallest_singular_values: smallest,
        gap: ns.gap,
    }
}

/// For each basis element, the larger of its crossing residual and its
/// commutator residual.
pub fn basis_residuals(c: &SymmetryConstraint, space: &InvariantSpace) -> Vec<f64> {
    space
        .basis
        .iter()
        .map(|t| {
            crossing_residual(&c.involution, t)
                .unwrap_or(f64::INFINITY)
                .max(c.commutator_residual(t))
        })
        .collect()
}

/// Real dimension of the `O(N)`-invariant crossing symmetric operators.
pub fn o_n_expected(n: usize, delta_trivial: bool) -> usize {
    match (delta_trivial, n) {
        (true, _) => 3,
        (false, 2) => 2,
        (false, _) => 1,
    }
}

/// `P_J = |ξ_J⟩⟨ξ_J|` with `ξ_J = Σ e_n ⊗ J e_n`.
pub fn p_j(s: &Involution) -> ComplexMatrix {
    xi_and_ps(&s.antiunitary_part()).1
}

/// Real spanning set of the predicted `O(N)`-invariant space.
pub fn o_n_spanning_set(s: &Involution) -> Vec<BipartiteOp> {
    let n = s.dim();
    let one = ComplexMatrix::identity(n * n);
    let pj = p_j(s);
    let f = flip(n);
    let wrap = |m: ComplexMatrix| BipartiteOp::with_base_dim(m, n).expect("n² x n²");
    let i_one_minus_pj = (&one - &pj).scale(I);
    if s.is_trivial_delta() {
        vec![wrap(&one + &pj), wrap(i_one_minus_pj), wrap(f)]
    } else if n == 2 {
        vec![wrap(f), wrap(i_one_minus_pj)]
    } else {
        vec![wrap(f)]
    }
}

/// Antiunitary involution matching a modular spectrum: eigenvalue pairs
/// `λ, 1/λ` with `λ ≠ 1` are swapped (with conjugation), eigenvalues `1` are
/// conjugated in place. Fails when the spectrum is not closed under
/// inversion, since then no `J` with `JΔJ = Δ⁻¹` exists.
pub fn paired_conjugation(spectrum: &[f64], tol: f64) -> Result<AntilinearOp> {
    let n = spectrum.len();
    if let Some(&bad) = spectrum.iter().find(|&&l| !(l > 0.0 && l.is_finite())) {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: bad });
    }
    let mut partner: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        if partner[i].is_some() {
            continue;
        }
        if (spectrum[i] - 1.0).abs() <= tol {
            partner[i] = Some(i);
            continue;
        }
        let j = (i + 1..n)
            .find(|&j| partner[j].is_none() && (spectrum[i] * spectrum[j] - 1.0).abs() <= tol)
            .ok_or_else(|| Error::InvalidModularRelation {
                residual: spectrum
                    .iter()
                    .map(|l| (spectrum[i] * l - 1.0).abs())
                    .fold(f64::INFINITY, f64::min),
            })?;
        partner[i] = Some(j);
        partner[j] = Some(i);
    }
    let mut m = ComplexMatrix::zeros(n, n);
    for (i, p) in partner.iter().enumerate() {
        m[(p.expect("all paired"), i)] = C64::new(1.0, 0.0);
    }
    Ok(AntilinearOp::new(m))
}

/// `S = JΔ^{1/2}` with `Δ = diag(spectrum)` and `J` from
/// [`paired_conjugation`].
pub fn paired_involution(spectrum: &[f64]) -> Result<Involution> {
    let j = paired_conjugation(spectrum, 1e-9)?;
    involution_from_parts(j, ComplexMatrix::diag_real(spectrum))
}

/// `Δ = 1` (`lambda = None`) or `Δ = diag(λ, 1/λ, 1, …, 1)`.
pub fn o_n_involution(n: usize, lambda: Option<f64>) -> Result<Involution> {
    let mut d = vec![1.0; n];
    if let Some(l) = lambda {
        d[0] = l;
        d[1] = 1.0 / l;
    }
    paired_involution(&d)
}

/// Generators of a dense subgroup of `O(N)` commuting with `J`: real
/// orthogonal matrices `R` conjugated into the `J`-fixed basis `W` as
/// `W R W*`. For `N = 2` a rotation by an irrational multiple of `π` and a
/// reflection; otherwise two random rotations and a reflection.
pub fn o_n_generators(s: &Involution, seed: u64) -> Vec<ComplexMatrix> {
    let n = s.dim();
    let w = s.j_basis();
    let mut reals: Vec<ComplexMatrix> = Vec::new();
    if n == 2 {
        let theta = std::f64::consts::PI * (5f64.sqrt() - 1.0) / 2.0;
        let (c, si) = (theta.cos(), theta.sin());
        reals.push(ComplexMatrix::from_real_rows(&[&[c, -si], &[si, c]]));
    } else {
        let mut rng = seeded(seed);
        for _ in 0..2 {
            let mut r = haar_orthogonal(&mut rng, n);
            if det_sign(&r) < 0.0 {
                for i in 0..n {
                    r[(i, 0)] = -r[(i, 0)];
                }
            }
            reals.push(r);
        }
    }
    let mut reflection = vec![1.0; n];
    reflection[n - 1] = -1.0;
    reals.push(ComplexMatrix::diag_real(&reflection));
    reals.iter().map(|r| &(w * r) * &w.adjoint()).collect()
}

fn det_sign(r: &ComplexMatrix) -> f64 {
    let m = nalgebra::DMatrix::<f64>::from_fn(r.rows(), r.cols(), |i, j| r[(i, j)].re);
    m.determinant().signum()
}

/// `n` Haar-random unitaries, generically generating a dense subgroup of
/// the full unitary group.
pub fn random_unitary_generators<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize) -> Vec<ComplexMatrix> {
    (0..count).map(|_| crate::random::haar_unitary(rng, dim)).collect()
}

/// Largest residuals of "predicted ⊂ computed" and "computed ⊂ predicted".
pub fn span_residuals(space: &InvariantSpace, predicted: &[BipartiteOp]) -> (f64, f64) {
    let computed = space.matrices();
    let pred: Vec<ComplexMatrix> = predicted.iter().map(|p| p.mat().clone()).collect();
    let forward = pred
        .iter()
        .map(|p| real_span_residual(p, &computed) / p.frobenius_norm().max(1.0))
        .fold(0.0, f64::max);
    let pred_basis = real_orthonormalize(&pred, 1e-10);
    let backward = computed
        .iter()
        .map(|c| real_span_residual(c, &pred_basis))
        .fold(0.0, f64::max);
    (forward, backward)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    /// `O(N)` commuting with `J`
    Orthogonal,
    /// a handful of Haar-random unitaries
    UnitaryRandom,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantCase {
    pub group: GroupKind,
    pub n: usize,
    pub spectrum: Vec<f64>,
    pub delta_trivial: bool,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantResult {
    pub case: InvariantCase,
    pub dim_found: usize,
    pub dim_expected: usize,
    pub basis_residuals: Vec<f64>,
    /// `[predicted ⊂ computed, computed ⊂ predicted]`
    pub span_residuals: [f64; 2],
    pub gap: f64,
    pub tolerance: f64,
}

impl InvariantResult {
    pub fn passed(&self) -> bool {
        self.dim_found == self.dim_expected
            && self.basis_residuals.iter().all(|r| *r <= self.tolerance)
            && self.span_residuals.iter().all(|r| *r <= self.tolerance)
    }
}

/// Computes the invariant crossing symmetric space for `Δ = diag(spectrum)`
/// and compares it with the predicted one: the `O(N)` classification, or
/// `R·F` for the unitary group.
pub fn invariant_case(group: GroupKind, spectrum: &[f64], seed: u64, tol: Tolerances) -> Result<InvariantResult> {
    let n = spectrum.len();
    if n < 2 {
        return Err(Error::PreconditionFailed("need N ≥ 2".into()));
    }
    let s = paired_involution(spectrum)?.with_tolerances(tol);
    let delta_trivial = s.is_trivial_delta();
    let (generators, predicted, dim_expected) = match group {
        GroupKind::Orthogonal => (o_n_generators(&s, seed), o_n_spanning_set(&s), o_n_expected(n, delta_trivial)),
        GroupKind::UnitaryRandom => {
            let mut rng = seeded(seed);
            (random_unitary_generators(&mut rng, n, 6), vec![BipartiteOp::flip(n)], 1)
        }
    };
    let c = SymmetryConstraint::new(generators, s)?;
    let space = invariant_crossing_space(&c);
    let [fwd, bwd] = {
        let (a, b) = span_residuals(&space, &predicted);
        [a, b]
    };
    Ok(InvariantResult {
        case: InvariantCase {
            group,
            n,
            spectrum: spectrum.to_vec(),
            delta_trivial,
            seed,
        },
        dim_found: space.dim(),
        dim_expected,
        basis_residuals: basis_residuals(&c, &space),
        span_residuals: [fwd, bwd],
        gap: space.gap,
        // constraint residuals scale with the operator dimension
        tolerance: (tol.identity * (n * n) as f64).max(1e-8),
    })
}

/// [`invariant_case`] for `O(N)` with `Δ = 1` or `Δ = diag(λ, 1/λ, 1, …)`.
pub fn o_n_classification(n: usize, lambda: Option<f64>, seed: u64) -> Result<InvariantResult> {
    let mut d = vec![1.0; n.max(2)];
    if let Some(l) = lambda {
        d[0] = l;
        d[1] = 1.0 / l;
    }
    d.truncate(n);
    invariant_case(GroupKind::Orthogonal, &d, seed, Tolerances::default())
}

/// `i(P_J − 1)` for `N = 2`, which in the eigenbasis of
/// `Δ = diag(λ, 1/λ)` is `i·[[−1,0,0,0],[0,0,1,0],[0,1,0,0],[0,0,0,−1]]`.
pub fn klr_matrix() -> BipartiteOp {
    let z = C64::new(0.0, 0.0);
    let m = ComplexMatrix::from_rows(&[&[-I, z, z, z], &[z, z, I, z], &[z, I, z, z], &[z, z, z, -I]]);
    BipartiteOp::with_base_dim(m, 2).expect("4x4")
}

/// `S = JΔ^{1/2}` with swap-conjugation `J` and `Δ = diag(λ, 1/λ)`, the
/// involution for which [`klr_matrix`] is crossing symmetric.
pub fn klr_involution(lambda: f64) -> Result<Involution> {
    involution_from_parts(swap_conjugation(), ComplexMatrix::diag_real(&[lambda, 1.0 / lambda]))
}

/// Checks the consequences of `[T, U⊗U] = 0`:
///
/// - `a`: `(S*US* ⊗ U) Cross_S(T) (U* ⊗ S*U*S*) = Cross_S(T)`;
/// - `b`, if `Cross_S(T) = T*`: `T = (1 ⊗ SUSU*) T (USU*S ⊗ 1)`;
/// - `d`, if `Cross_S(T) = T` and `[T, Δ⊗Δ] = 0`: `F(J⊗J)T(J⊗J)F = T`;
/// - `v_commutes`: `[V_ψ(T), U] = 0` for eigenvectors `ψ` of `U`, when
///   `Cross_S(T) = T*`.
///
/// Checks whose hypotheses fail are left out of the report.
pub fn exchange_lemma_checks(s: &Involution, t: &BipartiteOp, u: &ComplexMatrix) -> Result<VerificationReport> {
    let n = s.dim();
    if t.base_dim() != n || u.shape() != (n, n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if t.base_dim() != n { t.base_dim() } else { u.rows() },
        });
    }
    let tol = s.tolerances().scaled(n * n);
    let tm = t.mat();
    let tn = tm.frobenius_norm().max(1.0);
    let uu = kron(u, u);
    let pre = tm.commutator(&uu).frobenius_norm() / tn;
    if pre > tol {
        return Err(Error::PreconditionFailed(format!("[T, U⊗U] = {pre:.3e}")));
    }
    let mut report = VerificationReport::new("exchange_lemma");
    let m = s.s().mat();
    let ms = s.s_adjoint().mat().clone();
    let ud = u.adjoint();
    let id = ComplexMatrix::identity(n);
    // A U A for antilinear A with matrix M is linear with matrix M conj(U) conj(M)
    let sandwich = |a: &ComplexMatrix, x: &ComplexMatrix| &(a * &x.conj()) * &a.conj();

    let cross = cross_fast(s, t)?;
    let cm = cross.mat();
    let lhs = &(&kron(&sandwich(&ms, u), u) * cm) * &kron(&ud, &sandwich(&ms, &ud));
    report.record("a", lhs.distance(cm) / cm.frobenius_norm().max(1.0), tol);

    let sym = is_crossing_symmetric(s, t);
    if sym.symmetric {
        let b = kron(&id, &(&sandwich(m, u) * &ud));
        let c = kron(&(u * &sandwich(m, &ud)), &id);
        report.record("b", (&(&b * tm) * &c).distance(tm) / tn, tol);

        let (vals, vecs) = unitary_eigenvectors(u)?;
        let mut worst: f64 = 0.0;
        for (k, _) in vals.iter().enumerate() {
            let psi = vecs.col(k);
            let v = extract_v_diagonal(t, &psi)?;
            worst = worst.max(v.commutator(u).frobenius_norm() / tn);
        }
        report.record("v_commutes", worst, tol);
    }

    let fixed = cm.distance(tm) / tn <= tol;
    let dd = kron(s.delta(), s.delta());
    let modular = tm.commutator(&dd).frobenius_norm() / (tn * dd.frobenius_norm()) <= tol;
    if fixed && modular {
        let jj = kron(s.j().mat(), s.j().mat());
        let f = flip(n);
        let lhs = &(&f * &sandwich(&jj, tm)) * &f;
        report.record("d", lhs.distance(tm) / tn, tol);
    }
    report.push(
        Check::new("precondition", pre, tol)
            .param("crossing_symmetric", sym.symmetric)
            .param("crossing_fixed", fixed),
    );
    Ok(report)
}

/// Eigenvalues and orthonormal eigenvectors of a unitary via Schur
/// decomposition; for normal matrices the triangular factor is diagonal.
fn unitary_eigenvectors(u: &ComplexMatrix) -> Result<(Vec<C64>, ComplexMatrix)> {
    let (q, t) = u.to_nalgebra().schur().unpack();
    let n = u.rows();
    let off: f64 = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| t[(i, j)].norm_sqr())
        .sum::<f64>()
        .sqrt();
    if off > 1e-8 {
        return Err(Error::PreconditionFailed(format!("matrix is not normal ({off:.3e})")));
    }
    Ok(((0..n).map(|i| t[(i, i)]).collect(), ComplexMatrix::from_nalgebra(&q)))
}
