use std::path::Path;

use anyhow::{bail, Context};
use crosslab::crossing::{cross_power_checks, crossing_basic_checks, kms_boundary_check};
use crosslab::endomorphisms::endomorphism_checks;
use crosslab::io::{read_involution, read_json, read_operator, write_json, InvolutionSpec, QSystemSpec};
use crosslab::qsystem::{derived_data, jones_checks, twist_certificates, validate};
use crosslab::random::{random_vector, seeded};
use crosslab::symmetry::{invariant_case, GroupKind};
use crosslab::{BipartiteOp, Involution, Tolerances, VerificationReport};

use crate::output::{emit_json, summarize, Mode, Timer};
use crate::{Group, Suite};

pub const KMS_TIMES: [f64; 4] = [-1.0, 0.0, 0.5, 1.0];

/// Runs one suite, or all of them merged under `"all"`.
pub fn run_suite(s: &Involution, t: &BipartiteOp, suite: Suite, seed: u64) -> crosslab::Result<VerificationReport> {
    let one = |suite: Suite| -> crosslab::Result<VerificationReport> {
        match suite {
            Suite::CrossingBasic => crossing_basic_checks(s, t),
            Suite::CrossingPowers => cross_power_checks(s, t),
            Suite::Kms => {
                let mut rng = seeded(seed);
                let n = s.dim();
                let psi = [0, 1, 2, 3].map(|_| random_vector(&mut rng, n));
                kms_boundary_check(s, t, &KMS_TIMES, &psi)
            }
            Suite::Endomorphism => endomorphism_checks(t, s),
            Suite::All => unreachable!("expanded by the caller"),
        }
    };
    if suite != Suite::All {
        return one(suite);
    }
    let mut report = VerificationReport::new("all");
    for s in [Suite::CrossingBasic, Suite::CrossingPowers, Suite::Kms, Suite::Endomorphism] {
        report.extend(one(s)?);
    }
    Ok(report)
}

pub fn verify(t: &Path, s: &Path, suite: Suite, tol: Tolerances, seed: u64, mode: &Mode) -> anyhow::Result<bool> {
    let timer = Timer::start();
    let top = read_operator(t).with_context(|| format!("reading operator {}", t.display()))?;
    let inv = read_involution(s, tol).with_context(|| format!("reading involution {}", s.display()))?;
    if top.base_dim() != inv.dim() {
        bail!(
            "operator acts on C^{0} ⊗ C^{0} but the involution on C^{1}",
            top.base_dim(),
            inv.dim()
        );
    }
    let mut report = run_suite(&inv, &top, suite, seed)?;
    report.sort();
    timer.stamp(mode, &mut report);
    emit_json(mode, &report)?;
    summarize(mode, &report);
    Ok(report.passed())
}

/// `validate`, the twist certificates and, for special Q-systems, the
/// Jones projection checks.
pub fn qsystem_report(q: &crosslab::QSystem) -> crosslab::Result<VerificationReport> {
    let mut report = VerificationReport::new("qsystem");
    report.extend(validate(q));
    report.extend(twist_certificates(q));
    if q.special_dimension().is_some() {
        report.extend(jones_checks(q)?);
    }
    report.sort();
    Ok(report)
}

pub fn qsystem(
    spec: &Path,
    emit_twist: Option<&Path>,
    emit_involution: Option<&Path>,
    tol: Tolerances,
    mode: &Mode,
) -> anyhow::Result<bool> {
    let timer = Timer::start();
    let spec: QSystemSpec = read_json(spec).with_context(|| format!("reading Q-system spec {}", spec.display()))?;
    let q = spec.build(tol)?;
    let mut report = qsystem_report(&q)?;
    if emit_twist.is_some() || emit_involution.is_some() {
        let data = derived_data(&q)?;
        if let Some(p) = emit_twist {
            write_json(p, data.t.mat())?;
        }
        if let Some(p) = emit_involution {
            write_json(p, &InvolutionSpec::of(&data.s))?;
        }
    }
    timer.stamp(mode, &mut report);
    emit_json(mode, &report)?;
    if mode.human {
        if let Some(c) = report.get("qsystem.special") {
            let d = c.params.get("d").and_then(|v| v.as_f64()).unwrap_or(f64::NAN);
            eprintln!("dim {}, special {} (d = {d:.6})", q.dim(), c.passed);
        }
    }
    summarize(mode, &report);
    Ok(report.passed())
}

/// `trivial`, `2,0.5,1` or `[2, 0.5, 1]`.
pub fn parse_spectrum(s: &str) -> anyhow::Result<Option<Vec<f64>>> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("trivial") {
        return Ok(None);
    }
    let inner = s.trim_start_matches('[').trim_end_matches(']');
    let values = inner
        .split(',')
        .map(|x| x.trim().parse::<f64>().with_context(|| format!("bad spectrum entry {x:?}")))
        .collect::<anyhow::Result<Vec<f64>>>()?;
    if values.is_empty() {
        bail!("empty spectrum");
    }
    Ok(Some(values))
}

pub fn invariants(
    group: Group,
    delta: &str,
    dim: Option<usize>,
    tol: Tolerances,
    seed: u64,
    mode: &Mode,
) -> anyhow::Result<bool> {
    let (kind, n) = match group {
        Group::O2 => (GroupKind::Orthogonal, Some(2)),
        Group::O3 => (GroupKind::Orthogonal, Some(3)),
        Group::O4 => (GroupKind::Orthogonal, Some(4)),
        Group::UnitaryRandom => (GroupKind::UnitaryRandom, None),
    };
    let spectrum = match (parse_spectrum(delta)?, n.or(dim)) {
        (Some(sp), Some(n)) if sp.len() != n => bail!("spectrum has {} entries but N = {n}", sp.len()),
        (Some(sp), _) => sp,
        (None, Some(n)) => vec![1.0; n],
        (None, None) => vec![1.0; 3],
    };
    let result = invariant_case(kind, &spectrum, seed, tol)?;
    emit_json(mode, &result)?;
    if mode.human {
        eprintln!(
            "{} dim {} vs expected {}, max basis residual {:.3e}, span residuals {:.3e} / {:.3e}",
            if result.passed() { "PASS" } else { "FAIL" },
            result.dim_found,
            result.dim_expected,
            result.basis_residuals.iter().copied().fold(0.0, f64::max),
            result.span_residuals[0],
            result.span_residuals[1],
        );
    }
    Ok(result.passed())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectra() {
        assert_eq!(parse_spectrum("trivial").unwrap(), None);
        assert_eq!(parse_spectrum("2,0.5").unwrap(), Some(vec![2.0, 0.5]));
        assert_eq!(parse_spectrum("[2, 0.5, 1]").unwrap(), Some(vec![2.0, 0.5, 1.0]));
        assert!(parse_spectrum("2,x").is_err());
    }
}
