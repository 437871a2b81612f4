//! Q-systems in finite-dimensional Hilbert spaces and their twists `T = m*m`.
//!
//! A Q-system is `(X, m, ι)` with `m: X ⊗ X → X` associative, `ι ∈ X` a
//! unit, the Frobenius relation `(m⊗1)(1⊗m*) = m*m = (1⊗m)(m*⊗1)` and
//! `ι*ι = 1`. Special ones additionally have `mm* = d·1`.
//!
//! `ev = ι*m` is the bilinear form `ev(v⊗w) = ⟨Sv, w⟩` of an involution `S`,
//! and `T = m*m` is crossing symmetric with respect to that `S`.

pub mod group;
pub mod multimatrix;

use serde::{Deserialize, Serialize};

use crate::crossing::{
    cross_fast, cross_oracle, crossing_residual, exchange_residual, yang_baxter_residual, BipartiteOp,
};
use crate::error::{shape_err, Error, Result};
use crate::modular::{involution_from_matrix_with, xi_and_ps, Involution};
use crate::report::{Check, VerificationReport};
use crate::tensor::matrix::{flip, inner, kron, vec_distance};
use crate::tensor::{AntilinearOp, ComplexMatrix, C64};
use crate::tol::Tolerances;

pub use group::{
    coords_to_functions, functions_to_coords, multiplication_in_delta_basis, qsystem_functions_on_group,
    qsystem_group_algebra, FiniteGroup,
};
pub use multimatrix::{from_cstar, twist_of_multimatrix, MultiMatrixAlgebra};

/// Serialized as `{"dim": N, "m": Matrix, "iota": [[re, im], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QSystemJson", into = "QSystemJson")]
pub struct QSystem {
    dim: usize,
    m: ComplexMatrix,
    iota: Vec<C64>,
    tol: Tolerances,
}

#[derive(Serialize, Deserialize)]
struct QSystemJson {
    dim: usize,
    m: ComplexMatrix,
    iota: Vec<C64>,
}

impl TryFrom<QSystemJson> for QSystem {
    type Error = Error;
    fn try_from(q: QSystemJson) -> Result<Self> {
        if q.iota.len() != q.dim {
            return Err(Error::DimensionMismatch {
                expected: q.dim,
                found: q.iota.len(),
            });
        }
        QSystem::new(q.m, q.iota)
    }
}

impl From<QSystem> for QSystemJson {
    fn from(q: QSystem) -> Self {
        QSystemJson {
            dim: q.dim,
            m: q.m,
            iota: q.iota,
        }
    }
}

impl QSystem {
    /// `m` is `N × N²` with `m(e_i ⊗ e_j) = Σ_k m[k, iN + j] e_k`.
    pub fn new(m: ComplexMatrix, iota: Vec<C64>) -> Result<Self> {
        let n = iota.len();
        if n == 0 {
            return Err(shape_err("nonempty unit", "empty vector"));
        }
        if m.shape() != (n, n * n) {
            return Err(shape_err(format!("{n}x{}", n * n), format!("{}x{}", m.rows(), m.cols())));
        }
        if !m.data().iter().chain(&iota).all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            dim: n,
            m,
            iota,
            tol: Tolerances::default(),
        })
    }

    /// `X = C` with `m = 1`, `ι = 1`.
    pub fn trivial() -> Self {
        Self::new(ComplexMatrix::identity(1), vec![C64::new(1.0, 0.0)]).expect("1x1")
    }

    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn iota(&self) -> &[C64] {
        &self.iota
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Rescales `m ↦ λm`, `ι ↦ ι/λ` with `λ = ‖ι‖`, which keeps unitality
    /// and makes `ι*ι = 1`. `ev = ι*m`, and so the derived involution, is
    /// unchanged; the twist `m*m` scales by `λ²`. No rescaling by
    /// `(mm*)^{1/2}` is attempted.
    pub fn normalized(&self) -> Self {
        let lambda = crate::tensor::norm(&self.iota);
        Self {
            dim: self.dim,
            m: self.m.scale_real(lambda),
            iota: self.iota.iter().map(|z| z / lambda).collect(),
            tol: self.tol,
        }
    }

    pub fn m_adjoint(&self) -> ComplexMatrix {
        self.m.adjoint()
    }

    /// `mm*`, which is `d·1` exactly when the Q-system is special.
    pub fn mm_star(&self) -> ComplexMatrix {
        &self.m * &self.m.adjoint()
    }

    /// `(d, ‖mm* − d·1‖_F / max(1, d))` with `d = Tr(mm*)/N`.
    pub fn special_residual(&self) -> (f64, f64) {
        let mm = self.mm_star();
        let d = mm.trace().re / self.dim as f64;
        let residual = mm.distance(&ComplexMatrix::identity(self.dim).scale_real(d)) / d.abs().max(1.0);
        (d, residual)
    }

    /// The scalar `d` with `mm* = d·1`, if there is one.
    pub fn special_dimension(&self) -> Option<f64> {
        let (d, residual) = self.special_residual();
        (residual <= self.tol.scaled(self.dim) && d > 0.0).then_some(d)
    }

    fn unit_column(&self) -> ComplexMatrix {
        ComplexMatrix::column(&self.iota)
    }

    /// `ev = ι*m` as a `1 × N²` row.
    pub fn ev(&self) -> ComplexMatrix {
        &self.unit_column().adjoint() * &self.m
    }

    /// Dimension of the center `{c : m(c⊗v) = m(v⊗c) for all v}`.
    pub fn center_dim(&self) -> usize {
        let n = self.dim;
        // stacked over i: c ↦ m(c⊗e_i) − m(e_i⊗c)
        let a = ComplexMatrix::from_fn(n * n, n, |r, j| {
            let (i, k) = (r / n, r % n);
            self.m[(k, j * n + i)] - self.m[(k, i * n + j)]
        });
        let sv = a.to_nalgebra().singular_values();
        let scale = self.m.frobenius_norm().max(1.0);
        n - sv.iter().filter(|&&s| s > self.tol.rank_rel * scale * n as f64).count()
    }
}

fn op_norm_floor(m: &ComplexMatrix) -> f64 {
    m.operator_norm().max(1.0)
}

/// The five Q-system axioms, the conjugate equations and informational
/// entries for specialness (`d`) and the center dimension.
///
/// Residuals are Frobenius distances divided by the matching power of
/// `max(1, ‖m‖)`; each tolerance is `tol.identity · N`.
pub fn validate(q: &QSystem) -> VerificationReport {
    let n = q.dim;
    let tol = q.tol.scaled(n);
    let id = ComplexMatrix::identity(n);
    let m = &q.m;
    let ms = m.adjoint();
    let mn = op_norm_floor(m);
    let iota = q.unit_column();
    let mut report = VerificationReport::new("qsystem");

    let assoc_l = m * &kron(m, &id);
    let assoc_r = m * &kron(&id, m);
    report.record("associativity", assoc_l.distance(&assoc_r) / (mn * mn), tol);

    let unit_l = m * &kron(&iota, &id);
    let unit_r = m * &kron(&id, &iota);
    report.record("unit_left", unit_l.distance(&id) / mn, tol);
    report.record("unit_right", unit_r.distance(&id) / mn, tol);

    let t = &ms * m;
    let frob_l = &kron(m, &id) * &kron(&id, &ms);
    let frob_r = &kron(&id, m) * &kron(&ms, &id);
    report.record("frobenius_left", frob_l.distance(&t) / (mn * mn), tol);
    report.record("frobenius_right", frob_r.distance(&t) / (mn * mn), tol);

    let norm = inner(&q.iota, &q.iota);
    report.record("normalization", (norm - C64::new(1.0, 0.0)).norm(), tol);

    let ev = q.ev();
    let coev = ev.adjoint();
    let en = op_norm_floor(&ev).powi(2);
    let ce_l = &kron(&id, &ev) * &kron(&coev, &id);
    let ce_r = &kron(&ev, &id) * &kron(&id, &coev);
    report.record("conjugate_equation_left", ce_l.distance(&id) / en, tol);
    report.record("conjugate_equation_right", ce_r.distance(&id) / en, tol);

    let (d, residual) = q.special_residual();
    report.push(Check::new("special", residual, tol).param("d", d).informational());
    let center = q.center_dim();
    report.push(
        Check::new("irreducible", center.abs_diff(1) as f64, 0.0)
            .param("center_dim", center)
            .informational(),
    );
    report
}

/// Evaluation, coevaluation, involution and twist of a Q-system.
#[derive(Debug, Clone)]
pub struct DerivedData {
    /// `1 × N²`
    pub ev: ComplexMatrix,
    /// `N² × 1`, equal to `ξ_S`
    pub coev: ComplexMatrix,
    pub s: Involution,
    pub t: BipartiteOp,
}

/// `S` is read off from `ev(v⊗w) = ⟨Sv, w⟩`: with `B_ij = ev(e_i⊗e_j)` the
/// matrix of `S` is `B†`.
pub fn derived_data(q: &QSystem) -> Result<DerivedData> {
    let n = q.dim;
    let ev = q.ev();
    let coev = ev.adjoint();
    let b = ComplexMatrix::from_fn(n, n, |i, j| ev[(0, i * n + j)]);
    let s = involution_from_matrix_with(AntilinearOp::new(b.adjoint()), q.tol)
        .map_err(|e| Error::InvolutionFailure(e.to_string()))?;
    let t = BipartiteOp::with_base_dim(&q.m.adjoint() * &q.m, n)?;
    Ok(DerivedData { ev, coev, s, t })
}

/// Certificates for the twist `T = m*m`: crossing symmetry along both
/// crossing routes, `T = T*`, Yang–Baxter, the exchange relation,
/// commutation with `Δ⊗Δ` and `Δ^{it}⊗Δ^{it}`, the algebra-involution law
/// for `S` and `S*`, `coev = ξ_S`, and `T² = dT`, `‖T‖ = d` when special.
pub fn twist_certificates(q: &QSystem) -> VerificationReport {
    let mut report = VerificationReport::new("twist");
    let data = match derived_data(q) {
        Ok(d) => d,
        Err(e) => {
            report.push(Check::new("derived_data", f64::INFINITY, 0.0).param("error", e.to_string()));
            return report;
        }
    };
    let n = q.dim;
    let tol = q.tol.scaled(n);
    let t = &data.t;
    let tm = t.mat();
    let tn = tm.frobenius_norm().max(1.0);
    let s = &data.s;

    report.record("crossing_symmetry", crossing_residual(s, t).unwrap_or(f64::INFINITY), tol);
    let oracle = cross_oracle(s, t)
        .map(|c| c.mat().distance(&tm.adjoint()) / tn)
        .unwrap_or(f64::INFINITY);
    report.record("crossing_symmetry_oracle", oracle, tol);
    report.record("self_adjoint", tm.hermitian_residual() / tn, tol);
    report.record("yang_baxter", yang_baxter_residual(t), tol);
    report.record("exchange", exchange_residual(t), tol);

    let dd = kron(s.delta(), s.delta());
    report.record(
        "modular_commutation",
        tm.commutator(&dd).frobenius_norm() / (tn * dd.frobenius_norm().max(1.0)),
        tol,
    );
    for time in [0.3, -1.7] {
        let u = s.modular_group(time);
        let uu = kron(&u, &u);
        report.push(Check::new("modular_group", tm.commutator(&uu).frobenius_norm() / tn, tol).param("t", time));
    }

    let scale = op_norm_floor(&q.m) * s.s().mat().frobenius_norm().max(1.0).powi(2);
    let f = flip(n);
    for (name, ms) in [("involution_law", s.s().mat().clone()), ("involution_law_adjoint", s.s_adjoint().mat().clone())] {
        // S m(v⊗w) = m(Sw ⊗ Sv), as antilinear matrices
        let lhs = &ms * &q.m.conj();
        let rhs = &(&q.m * &f) * &kron(&ms, &ms);
        report.record(name, lhs.distance(&rhs) / scale, tol);
    }

    let (xi, _) = xi_and_ps(s);
    report.record("coev_is_xi", vec_distance(&data.coev.col(0), &xi), tol);

    if let Some(d) = q.special_dimension() {
        let t2 = tm * tm;
        report.push(Check::new("twist_square", t2.distance(&tm.scale_real(d)) / (d * tn), tol).param("d", d));
        report.push(Check::new("twist_norm", (tm.operator_norm() - d).abs() / d, tol).param("d", d));
    }
    report
}

/// `E = d⁻¹ coev ev`, the projection onto `ξ_S`.
pub fn jones_projection(q: &QSystem) -> Result<ComplexMatrix> {
    let (d, residual) = q.special_residual();
    if residual > q.tol.scaled(q.dim) || d <= 0.0 {
        return Err(Error::NotSpecial { residual });
    }
    let ev = q.ev();
    Ok((&ev.adjoint() * &ev).scale_real(1.0 / d))
}

/// `E = E* = E²`, `Cross_S(1) = dE`, and whether `E` is crossing symmetric.
///
/// `E` is crossing symmetric only for the trivial Q-system; for `N > 1` the
/// defect `‖Cross_S(E) − E*‖` is recorded with a lower bound of 0.1.
pub fn jones_checks(q: &QSystem) -> Result<VerificationReport> {
    let e = jones_projection(q)?;
    let d = q.special_dimension().expect("special, checked above");
    let data = derived_data(q)?;
    let n = q.dim;
    let tol = q.tol.scaled(n);
    let mut report = VerificationReport::new("jones");
    report.record("idempotent", (&e * &e).distance(&e), tol);
    report.record("self_adjoint", e.hermitian_residual(), tol);
    let one = BipartiteOp::identity(n);
    let c1 = cross_oracle(&data.s, &one)?;
    report.push(Check::new("cross_of_identity", c1.mat().distance(&e.scale_real(d)) / d, tol).param("d", d));
    let ce = cross_fast(&data.s, &BipartiteOp::with_base_dim(e.clone(), n)?)?;
    let defect = ce.mat().distance(&e.adjoint());
    if n == 1 {
        report.record("crossing_symmetric", defect, tol);
    } else {
        report.record_lower_bound("crossing_defect", defect, 0.1);
    }
    Ok(report)
}
