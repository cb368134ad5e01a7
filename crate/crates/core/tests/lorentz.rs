mod common;

use std::collections::BTreeSet;

use isocone_lab::lorentz::{
    boost_transform, boost_vector, cone_membership, lambda_order, lambda_relation, lorentz_distance, minkowski_sq,
    near_boundary, LorentzPatch, MinkowskiPoint, TableSpacetime,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn patch(seed: u64, n: usize, dim: usize) -> LorentzPatch {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bbox = vec![(0.0, 3.0)];
    bbox.extend(std::iter::repeat((-1.5, 1.5)).take(dim - 1));
    LorentzPatch::sprinkle(n, &bbox, &mut rng).unwrap()
}

fn pairs(p: &LorentzPatch, lam: f64) -> BTreeSet<(usize, usize)> {
    lambda_order(p, lam).unwrap().strict_pairs().collect()
}

#[test]
fn csv_round_trip_is_exact() {
    let p = patch(1, 50, 3);
    let mut buf = Vec::new();
    p.write_csv(&mut buf).unwrap();
    assert!(buf.starts_with(b"t,x1,x2\n"));
    let back = LorentzPatch::read_csv(buf.as_slice()).unwrap();
    assert_eq!(back.points(), p.points());
}

#[test]
fn table_spacetime_reproduces_the_flat_order() {
    let p = patch(2, 60, 2);
    let table = TableSpacetime::from_patch(&p);
    for lam in [0.2, 0.5, 1.0] {
        let a: BTreeSet<_> = table.lambda_order(lam).unwrap().strict_pairs().collect();
        assert_eq!(a, pairs(&p, lam), "Λ = {lam}");
    }
}

#[test]
fn zero_lambda_is_the_causal_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10_000 {
        let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let causal = v[0] >= 0.0 && v[0] * v[0] >= v[1] * v[1] + v[2] * v[2];
        assert_eq!(cone_membership(&v, 0.0, false), causal, "{v:?}");
    }
    assert!(cone_membership(&[0.0, 0.0], 0.0, false));
    assert!(!cone_membership(&[0.0, 0.0], 0.5, false));
    assert!(cone_membership(&[0.0, 0.0], 0.5, true));
    assert!(cone_membership(&[1.0, 1.0], 0.0, false));
}

#[test]
fn proper_time_matches_interval() {
    let x = MinkowskiPoint::new(vec![0.0, 0.0]).unwrap();
    let y = MinkowskiPoint::new(vec![5.0, 3.0]).unwrap();
    assert_eq!(lorentz_distance(&x, &y).unwrap(), 4.0);
    assert_eq!(lorentz_distance(&y, &MinkowskiPoint::new(vec![5.0, 0.0]).unwrap()).unwrap(), 0.0);
}

#[test]
fn relation_matches_cone_oracle() {
    let p = patch(4, 300, 3);
    let rel = lambda_relation(&p, 0.4).unwrap();
    let c = p.coordinates();
    for i in 0..p.len() {
        for j in 0..p.len() {
            if rel.contains(i, j) != common::in_lambda_cone(&c[i], &c[j], 0.4) {
                assert!(near_boundary(&p, 0.4, i, j, 1e-9));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn larger_lambda_gives_fewer_pairs(seed in any::<u64>(), a in 0.01f64..1.5, b in 0.01f64..1.5) {
        let p = patch(seed, 150, 2);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(pairs(&p, hi).is_subset(&pairs(&p, lo)));
    }

    #[test]
    fn boosts_preserve_the_interval(seed in any::<u64>(), rapidity in -2.0f64..2.0, axis in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let w = boost_vector(&v, rapidity, axis);
        let scale = v.iter().map(|c| c * c).sum::<f64>() * (2.0 * rapidity.abs()).exp();
        prop_assert!((minkowski_sq(&v) - minkowski_sq(&w)).abs() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn poincare_transforms_keep_pairs(seed in any::<u64>(), rapidity in -2.0f64..2.0, dt in -5.0f64..5.0, dx in -5.0f64..5.0) {
        let p = patch(seed, 200, 2);
        let moved = boost_transform(&p, rapidity, 1).unwrap().translate(&[dt, dx]).unwrap();
        let (a, b) = (pairs(&p, 0.5), pairs(&moved, 0.5));
        for &(i, j) in a.symmetric_difference(&b) {
            prop_assert!(near_boundary(&p, 0.5, i, j, 1e-9), "({}, {}) flipped", i, j);
        }
    }
}
