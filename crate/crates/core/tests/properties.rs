use hilbert_bohr::algebra::AlgebraShape;
use hilbert_bohr::generators::{ConjugatePair, Guards};
use hilbert_bohr::module::{ModuleElement, ModuleSpace};
use hilbert_bohr::suite::{self, RunConfig};
use hilbert_bohr::theorem::{TheoremId, WitnessTarget};
use hilbert_bohr::verifier::{pq_sides, witness_violation};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn any_theorem() -> impl Strategy<Value = TheoremId> {
    prop::sample::select(TheoremId::ALL.to_vec())
}

fn any_space() -> impl Strategy<Value = ModuleSpace> {
    prop_oneof![
        Just(ModuleSpace::self_module(AlgebraShape::new(vec![2, 3]).unwrap())),
        (1usize..=4).prop_map(|k| ModuleSpace::direct_sum(k, AlgebraShape::new(vec![1, 2]).unwrap()).unwrap()),
        (1usize..=4).prop_map(|k| ModuleSpace::seq(k, AlgebraShape::full(2).unwrap()).unwrap()),
        (1usize..=3, 1usize..=3, 1usize..=3).prop_map(|(n, m, d)| ModuleSpace::rect_tuple(n, m, d).unwrap()),
        prop::collection::vec(1usize..=3, 1..=5).prop_map(|f| ModuleSpace::bundle(f).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // every generated trial is admissible and within tolerance
    #[test]
    fn seeded_trials_pass(theorem in any_theorem(), seed in any::<u64>(), index in 0usize..400) {
        let config = RunConfig { theorems: vec![theorem], seed, ..RunConfig::default() };
        let outcome = suite::run_trial(&config, theorem, index);
        prop_assert!(outcome.passed, "{:?}", outcome.result);
    }

    #[test]
    fn trials_replay_identically(theorem in any_theorem(), seed in any::<u64>(), index in 0usize..200) {
        let config = RunConfig { theorems: vec![theorem], seed, ..RunConfig::default() };
        prop_assert_eq!(suite::run_trial(&config, theorem, index), suite::run_trial(&config, theorem, index));
    }

    // RHS − LHS₍ᵢ₎ = (1/(p−1) − 1)|(1−p)x − y|²
    #[test]
    fn decomposition_is_exact(p in 1.05f64..20.0, space in any_space(), seed in any::<u64>()) {
        let pair = ConjugatePair::new(p, &Guards::default()).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let x = ModuleElement::random(&space, &mut rng);
        let y = ModuleElement::random(&space, &mut rng);
        let s = pq_sides(&pair, &x, &y).unwrap();
        let gap = s.rhs.sub(&s.lhs_i).unwrap();
        let predicted = s.z_sq.scale_real(1.0 / (p - 1.0) - 1.0);
        let scale = s.rhs.frobenius_norm().max(s.lhs_i.frobenius_norm()).max(1.0);
        prop_assert!(gap.distance(&predicted).unwrap() <= 1e-10 * scale);
        prop_assert!(s.rhs.distance(&s.lhs_xyp).unwrap() <= 1e-10 * scale);
        prop_assert!(s.rhs.distance(&s.lhs_q).unwrap() <= 1e-10 * scale);
    }

    // the violated side is the one the sign of p − 2 predicts
    #[test]
    fn violations_follow_the_exponent(p in 1.05f64..20.0, space in any_space(), seed in any::<u64>()) {
        prop_assume!((p - 2.0).abs() > 1e-3);
        let pair = ConjugatePair::new(p, &Guards::default()).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let x = ModuleElement::random(&space, &mut rng);
        let y = ModuleElement::random(&space, &mut rng);
        let (vi, pi) = witness_violation(WitnessTarget::BohrI, &pair, &x, &y).unwrap();
        let (vii, pii) = witness_violation(WitnessTarget::BohrII, &pair, &x, &y).unwrap();
        let scale = pi.abs().max(pii.abs()).max(1.0);
        prop_assert!((vi - pi).abs() <= 1e-9 * scale);
        prop_assert!((vii - pii).abs() <= 1e-9 * scale);
        if p > 2.0 {
            prop_assert!(vi > 0.0 && vii <= 1e-9 * scale);
        } else {
            prop_assert!(vii > 0.0 && vi <= 1e-9 * scale);
        }
    }
}
