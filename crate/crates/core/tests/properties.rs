use crosslab::crossing::{
    cross_antiunitary, cross_fast, cross_inverse, cross_oracle, crossing_residual, hat_operators, kms_sides,
};
use crosslab::endomorphisms::{reconstruct_t, EndoFamily};
use crosslab::io::{from_json_str, InvolutionSpec};
use crosslab::modular::xi_and_ps;
use crosslab::qsystem::{from_cstar, qsystem_functions_on_group, qsystem_group_algebra, twist_certificates, twist_of_multimatrix, validate};
use crosslab::random::{random_involution, random_matrix, random_vector, seeded};
use crosslab::tensor::kron;
use crosslab::{BipartiteOp, ComplexMatrix, FiniteGroup, MultiMatrixAlgebra, QSystem, Tolerances};
use proptest::prelude::*;

fn setup(seed: u64, n: usize, spread: f64) -> (crosslab::Involution, BipartiteOp) {
    let mut rng = seeded(seed);
    let s = random_involution(&mut rng, n, spread);
    let t = BipartiteOp::new(random_matrix(&mut rng, n * n, n * n)).unwrap();
    (s, t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn routes_agree(seed in any::<u64>(), n in 1usize..5, spread in 0.0f64..1.2) {
        let (s, t) = setup(seed, n, spread);
        let a = cross_oracle(&s, &t).unwrap();
        let b = cross_fast(&s, &t).unwrap();
        prop_assert!(b.mat().rel_distance(a.mat()) < 1e-9);
    }

    #[test]
    fn flip_fixed_and_unit_to_ps(seed in any::<u64>(), n in 1usize..5) {
        let (s, _) = setup(seed, n, 0.8);
        let f = BipartiteOp::flip(n);
        prop_assert!(cross_fast(&s, &f).unwrap().mat().rel_distance(f.mat()) < 1e-10);
        let (_, ps) = xi_and_ps(&s);
        prop_assert!(cross_fast(&s, &BipartiteOp::identity(n)).unwrap().mat().rel_distance(&ps) < 1e-10);
    }

    #[test]
    fn fourth_power(seed in any::<u64>(), n in 2usize..5) {
        let (s, t) = setup(seed, n, 0.8);
        let mut c = t.clone();
        for _ in 0..4 {
            c = cross_fast(&s, &c).unwrap();
        }
        let dd = kron(s.delta(), s.delta());
        let inv = kron(&s.delta_power_real(-1.0), &s.delta_power_real(-1.0));
        prop_assert!(c.mat().rel_distance(&(&(&dd * t.mat()) * &inv)) < 1e-9);
    }

    #[test]
    fn inverse_both_sides(seed in any::<u64>(), n in 1usize..5) {
        let (s, t) = setup(seed, n, 0.8);
        let c = cross_fast(&s, &t).unwrap();
        prop_assert!(cross_inverse(&s, &c).unwrap().mat().rel_distance(t.mat()) < 1e-9);
        let i = cross_inverse(&s, &t).unwrap();
        prop_assert!(cross_fast(&s, &i).unwrap().mat().rel_distance(t.mat()) < 1e-9);
    }

    #[test]
    fn s_hat_is_an_involution_through_j_hat(seed in any::<u64>(), n in 1usize..4) {
        let (s, t) = setup(seed, n, 0.8);
        let hats = hat_operators(&s);
        prop_assert!(hats.s_hat(&hats.s_hat(&t)).mat().rel_distance(t.mat()) < 1e-9);
        let via_j = hats.j_hat(&hats.delta_hat(0.5, &t));
        prop_assert!(via_j.mat().rel_distance(hats.s_hat(&t).mat()) < 1e-9);
    }

    #[test]
    fn j_crossing_preserves_hs_norm(seed in any::<u64>(), n in 1usize..5) {
        let (s, t) = setup(seed, n, 0.8);
        let c = cross_antiunitary(&s, &t).unwrap();
        let tn = t.mat().frobenius_norm();
        prop_assert!((c.mat().frobenius_norm() - tn).abs() <= 1e-10 * tn);
    }

    #[test]
    fn kms_boundary_condition(seed in any::<u64>(), n in 1usize..4, time in -2.0f64..2.0) {
        let (s, t) = setup(seed, n, 0.8);
        let mut rng = seeded(seed ^ 0x5eed);
        let psi = [0; 4].map(|_| random_vector(&mut rng, n));
        let (lhs, rhs, scale) = kms_sides(&s, &t, time, &psi).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-8 * scale);
    }

    #[test]
    fn symmetrization_is_crossing_symmetric(seed in any::<u64>(), n in 1usize..4) {
        let (s, t) = setup(seed, n, 0.8);
        let sym = t.add(&hat_operators(&s).s_hat(&t));
        prop_assert!(crossing_residual(&s, &sym).unwrap() < 1e-9);
        let back = reconstruct_t(&EndoFamily::from_operator(&sym)).unwrap();
        prop_assert!(back.mat().rel_distance(sym.mat()) < 1e-9);
    }

    #[test]
    fn modular_relations(seed in any::<u64>(), n in 1usize..6) {
        let (s, _) = setup(seed, n, 1.0);
        for r in s.invariant_residuals() {
            prop_assert!(r < 1e-9);
        }
    }

    #[test]
    fn involution_json_round_trip(seed in any::<u64>(), n in 1usize..4) {
        let (s, _) = setup(seed, n, 0.5);
        let text = serde_json::to_string(&InvolutionSpec::of(&s)).unwrap();
        let back = from_json_str::<InvolutionSpec>(&text).unwrap().build(Tolerances::default()).unwrap();
        prop_assert!(back.s().mat().distance(s.s().mat()) < 1e-12);
        prop_assert!(back.delta().rel_distance(s.delta()) < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn cyclic_and_dihedral_certificates(k in 2usize..7, dihedral in any::<bool>(), algebra in any::<bool>()) {
        let g = if dihedral { FiniteGroup::dihedral(k.max(3)) } else { FiniteGroup::cyclic(k) };
        let q = if algebra { qsystem_group_algebra(&g) } else { qsystem_functions_on_group(&g) };
        prop_assert!(validate(&q).passed());
        prop_assert!(twist_certificates(&q).passed());
        prop_assert!((q.special_dimension().unwrap() - g.order() as f64).abs() < 1e-10);
    }

    #[test]
    fn multimatrix_twists(seed in any::<u64>(), layout in 0usize..4) {
        let blocks: &[usize] = [&[1, 1][..], &[2], &[1, 2], &[1, 1, 2]][layout];
        let a = MultiMatrixAlgebra::random(&mut seeded(seed), blocks);
        let q = from_cstar(&a).unwrap();
        prop_assert!(validate(&q).passed());
        prop_assert!(twist_certificates(&q).passed());
        let gns = &q.m().adjoint() * q.m();
        prop_assert!(twist_of_multimatrix(&a).unwrap().mat().rel_distance(&gns) < 1e-9);
        prop_assert_eq!(q.special_dimension().is_some(), a.is_special());
    }

    #[test]
    fn qsystem_json_round_trip(k in 2usize..5) {
        let q = qsystem_functions_on_group(&FiniteGroup::cyclic(k));
        let text = serde_json::to_string(&q).unwrap();
        let back: QSystem = from_json_str(&text).unwrap();
        prop_assert!(back.m().distance(q.m()) == 0.0);
        let m: ComplexMatrix = from_json_str(&serde_json::to_string(q.m()).unwrap()).unwrap();
        prop_assert_eq!(&m, q.m());
    }
}
