use isocone_lab::hermitian::{IsotoneFunction, PureStateVector};
use isocone_lab::isocone_fd::{
    diamond_algebra, empirical_order, induced_order, isocone_axiom_suite, lex_membership, random_state_pairs,
    sample_elements, sample_elements_with_generators, LexIsocone, LexJson, Membership, SitedPureState,
};
use isocone_lab::order_core::Comparison;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MESH: f64 = 2.0;

#[test]
fn json_round_trip_preserves_the_sum() {
    let lex = diamond_algebra();
    let text = serde_json::to_string(&lex.to_json()).unwrap();
    let back = LexIsocone::from_json(&serde_json::from_str::<LexJson>(&text).unwrap()).unwrap();
    assert_eq!(back.profile(), vec![1, 2, 3, 2]);
    assert_eq!(back.to_json(), lex.to_json());
}

#[test]
fn qubit_blocks_at_trivial_sizes_are_rejected() {
    let bad = r#"{"profile": [2], "strict": [], "cones": [{"trivial": 2}]}"#;
    assert!(LexIsocone::from_json(&serde_json::from_str(bad).unwrap()).is_err());
    let cyclic = r#"{"profile": [1, 1], "strict": [[0, 1], [1, 0]], "cones": [{"trivial": 1}, {"trivial": 1}]}"#;
    assert!(LexIsocone::from_json(&serde_json::from_str(cyclic).unwrap()).is_err());
}

#[test]
fn gap_violations_are_detected() {
    let lex = diamond_algebra();
    // Site 0 below site 1, but larger.
    let a = lex.scalar_element(&[5.0, 0.0, 6.0, 7.0]);
    assert!(matches!(lex_membership(&a, &lex).unwrap(), Membership::GapViolation { x: 0, y: 1, .. }));
    assert!(lex_membership(&lex.scalar_element(&[0.0, 1.0, 1.0, 2.0]), &lex).unwrap().is_member());
}

#[test]
fn samples_satisfy_the_axioms() {
    let lex = diamond_algebra();
    let elems = sample_elements(&lex, 100, 4);
    for a in &elems {
        assert!(lex_membership(a, &lex).unwrap().is_member());
    }
    for f in [IsotoneFunction::clip_below(0.0), IsotoneFunction::affine(2.0, -1.0).unwrap()] {
        let report = isocone_axiom_suite(&lex, &elems, &f, 300, 4).unwrap();
        assert!(report.passed(), "{report:?}");
    }
}

#[test]
fn three_level_site_is_trivially_ordered() {
    let lex = diamond_algebra();
    let elems = sample_elements_with_generators(&lex, 50, 7, MESH);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let s = SitedPureState { site: 2, state: PureStateVector::random(&mut rng, 3) };
        let t = SitedPureState { site: 2, state: PureStateVector::random(&mut rng, 3) };
        assert_eq!(induced_order(&lex, &s, &t, MESH).unwrap(), Comparison::Incomparable);
        assert_eq!(empirical_order(&elems, &s, &t).unwrap().comparison, Comparison::Incomparable);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sparse_samples_only_coarsen(seed in any::<u64>(), count in 1usize..15) {
        let lex = diamond_algebra();
        let elems = sample_elements(&lex, count, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (s, t) in random_state_pairs(&lex, 40, &mut rng) {
            let ind = induced_order(&lex, &s, &t, MESH).unwrap();
            let emp = empirical_order(&elems, &s, &t).unwrap().comparison;
            if ind == Comparison::LessOrEqual {
                prop_assert!(matches!(emp, Comparison::LessOrEqual | Comparison::Equal), "{:?}", emp);
            }
            if ind == Comparison::Equal {
                prop_assert_eq!(emp, Comparison::Equal);
            }
        }
    }
}
