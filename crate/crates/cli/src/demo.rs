//! The gallery of worked examples, one verdict line per item.

use crosslab::crossing::{cross_fast, yang_baxter_residual};
use crosslab::modular::xi_and_ps;
use crosslab::qsystem::{derived_data, from_cstar, qsystem_functions_on_group, qsystem_group_algebra, twist_of_multimatrix};
use crosslab::random::{random_involution, random_matrix, seeded, Rng64};
use crosslab::symmetry::{invariant_case, klr_involution, klr_matrix, GroupKind};
use crosslab::{BipartiteOp, ComplexMatrix, FiniteGroup, Involution, MultiMatrixAlgebra, QSystem, Tolerances, VerificationReport};
use serde::Serialize;

use crate::commands::{qsystem_report, run_suite};
use crate::output::{emit_json, Mode, Timer};
use crate::Suite;

#[derive(Serialize)]
struct Item {
    item: String,
    passed: bool,
    max_residual: f64,
    report: VerificationReport,
}

#[derive(Serialize)]
struct Gallery {
    suite: &'static str,
    passed: bool,
    items: Vec<Item>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time: Option<f64>,
}

fn involution(rng: &mut Rng64, n: usize, tol: Tolerances) -> Involution {
    random_involution(rng, n, 0.8).with_tolerances(tol)
}

fn operator(rng: &mut Rng64, n: usize) -> BipartiteOp {
    BipartiteOp::with_base_dim(random_matrix(rng, n * n, n * n), n).expect("n² x n²")
}

fn q_item(name: &str, q: QSystem, tol: Tolerances) -> crosslab::Result<(String, VerificationReport)> {
    Ok((name.to_string(), qsystem_report(&q.with_tolerances(tol))?))
}

fn items(tol: Tolerances, seed: u64) -> crosslab::Result<Vec<(String, VerificationReport)>> {
    let mut rng = seeded(seed);
    let mut out = Vec::new();
    let scale = |n: usize| tol.scaled(n * n);

    let s = involution(&mut rng, 3, tol);
    let mut r = run_suite(&s, &BipartiteOp::flip(3), Suite::CrossingBasic, seed)?;
    r.record("cross_of_flip", cross_fast(&s, &BipartiteOp::flip(3))?.mat().distance(&crosslab::tensor::flip(3)), scale(3));
    out.push(("flip".into(), r));

    let (_, ps) = xi_and_ps(&s);
    let mut r = VerificationReport::new("unit");
    let c1 = cross_fast(&s, &BipartiteOp::identity(3))?;
    r.record("cross_of_identity", c1.mat().rel_distance(&ps), scale(3));
    let cps = cross_fast(&s, &BipartiteOp::with_base_dim(ps, 3)?)?;
    r.record("cross_of_ps", cps.mat().rel_distance(&ComplexMatrix::identity(9)), scale(3));
    out.push(("unit and P_S".into(), r));

    let t = operator(&mut rng, 3);
    out.push(("crossing powers".into(), run_suite(&s, &t, Suite::CrossingPowers, seed)?));
    out.push(("KMS boundary".into(), run_suite(&s, &t, Suite::Kms, seed)?));
    out.push(("endomorphisms".into(), run_suite(&s, &t, Suite::Endomorphism, seed)?));

    let sk = klr_involution(2.0)?.with_tolerances(tol);
    let mut r = run_suite(&sk, &klr_matrix(), Suite::CrossingBasic, seed)?;
    r.record("yang_baxter", yang_baxter_residual(&klr_matrix()), scale(2));
    out.push(("klR".into(), r));

    for n in [2, 3, 4] {
        let g = FiniteGroup::cyclic(n);
        out.push(q_item(&format!("C(Z{n})"), qsystem_functions_on_group(&g), tol)?);
    }
    for name in ["Z2", "Z3", "S3"] {
        let g = FiniteGroup::by_name(name)?;
        out.push(q_item(&format!("L1({name})"), qsystem_group_algebra(&g), tol)?);
    }
    out.push(q_item("M2, trace state", from_cstar(&MultiMatrixAlgebra::standard(vec![2])?)?, tol)?);
    let a = MultiMatrixAlgebra::new(
        vec![1, 2],
        vec![ComplexMatrix::diag_real(&[0.5]), ComplexMatrix::diag_real(&[0.25, 0.25])],
    )?;
    out.push(q_item("C+M2, non-special", from_cstar(&a)?, tol)?);

    let a = MultiMatrixAlgebra::random(&mut rng, &[1, 2]);
    let mut r = VerificationReport::new("closed_form");
    let gns = derived_data(&from_cstar(&a)?.with_tolerances(tol))?.t;
    r.record("twist_agreement", twist_of_multimatrix(&a)?.mat().rel_distance(gns.mat()), scale(a.gns_dim()));
    out.push(("closed-form twist".into(), r));

    for (label, spectrum) in [
        ("O(2), Δ = 1", vec![1.0, 1.0]),
        ("O(2), Δ = diag(2, 1/2)", vec![2.0, 0.5]),
        ("O(3), Δ = diag(2, 1/2, 1)", vec![2.0, 0.5, 1.0]),
    ] {
        let res = invariant_case(GroupKind::Orthogonal, &spectrum, seed, tol)?;
        let mut r = VerificationReport::new("invariants");
        r.record_count("dimension", res.dim_found, res.dim_expected);
        let worst = res.basis_residuals.iter().copied().fold(0.0, f64::max);
        r.record("basis_residual", worst, res.tolerance);
        r.record("span_predicted_in_computed", res.span_residuals[0], res.tolerance);
        r.record("span_computed_in_predicted", res.span_residuals[1], res.tolerance);
        out.push((label.into(), r));
    }
    Ok(out)
}

pub fn run(tol: Tolerances, seed: u64, mode: &Mode) -> anyhow::Result<bool> {
    let timer = Timer::start();
    let mut gallery = Gallery {
        suite: "demo",
        passed: true,
        items: Vec::new(),
        wall_time: None,
    };
    for (name, mut report) in items(tol, seed)? {
        report.sort();
        let passed = report.passed();
        gallery.passed &= passed;
        if mode.human {
            println!(
                "{} {name} (max residual {:.2e})",
                if passed { "PASS" } else { "FAIL" },
                report.max_residual()
            );
            for c in report.failures() {
                println!("    {} residual {:.3e} > {:.3e}", c.name, c.residual, c.tolerance);
            }
        }
        gallery.items.push(Item {
            item: name,
            passed,
            max_residual: report.max_residual(),
            report,
        });
    }
    if mode.timing {
        let mut r = VerificationReport::new("demo");
        timer.stamp(mode, &mut r);
        gallery.wall_time = r.wall_time;
    }
    if mode.human {
        println!(
            "{}: {} items",
            if gallery.passed { "all passed" } else { "FAILED" },
            gallery.items.len()
        );
    } else {
        emit_json(mode, &gallery)?;
    }
    Ok(gallery.passed)
}
