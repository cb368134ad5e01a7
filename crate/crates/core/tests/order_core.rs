mod common;

use isocone_lab::order_core::{
    epsilon_cutoff, incomparability_ball, levin_utility, transitive_closure, validate_order, FiniteOrder,
    MetricPointCloud, OrderError, Relation, Scale,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dag(seed: u64, n: usize, p: f64) -> (Relation, Vec<Vec<bool>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = common::random_dag(&mut rng, n, p);
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in &edges {
        adj[a][b] = true;
    }
    (Relation::from_pairs(n, edges).unwrap(), adj)
}

#[test]
fn closure_matches_floyd_warshall_on_random_dags() {
    for seed in 0..50 {
        let (rel, adj) = dag(seed, 20, 0.15);
        let order = transitive_closure(&rel).unwrap();
        let oracle = common::floyd_warshall(&adj);
        for x in 0..20 {
            for y in 0..20 {
                assert_eq!(order.less(x, y), oracle[x][y], "seed {seed} ({x},{y})");
            }
        }
    }
}

#[test]
fn cycles_are_reported_as_paths() {
    let rel = Relation::from_pairs(4, [(0, 1), (1, 2), (2, 3), (3, 1)]).unwrap();
    match transitive_closure(&rel) {
        Err(OrderError::Cycle { path }) => {
            assert_eq!(path.first(), path.last());
            for w in path.windows(2) {
                assert!(rel.contains(w[0], w[1]), "{path:?}");
            }
        }
        other => panic!("expected a cycle, got {other:?}"),
    }
}

#[test]
fn report_names_each_violation() {
    let report = validate_order(&Relation::from_pairs(3, [(0, 0), (1, 2), (2, 1)]).unwrap());
    assert_eq!(report.reflexive_pair, Some(0));
    assert!(report.antisymmetry.is_some());
    assert!(report.transitivity.is_some());
    assert!(!report.is_valid());
}

fn cloud_and_order(seed: u64, n: usize) -> (MetricPointCloud, FiniteOrder) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)]).collect();
    // Product order on the plane: a strict order with metric meaning.
    let rel = Relation::from_fn(n, |i, j| i != j && pts[i][0] < pts[j][0] && pts[i][1] < pts[j][1]);
    (MetricPointCloud::euclidean(pts).unwrap(), FiniteOrder::new(rel).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_is_idempotent(seed in any::<u64>(), n in 1usize..=20, p in 0.0f64..0.4) {
        let (rel, _) = dag(seed, n, p);
        let once = transitive_closure(&rel).unwrap();
        let twice = transitive_closure(once.relation()).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn levin_gap_and_isotony(seed in any::<u64>(), n in 1usize..=30, p in 0.0f64..0.4) {
        let (rel, _) = dag(seed, n, p);
        let order = transitive_closure(&rel).unwrap();
        let g = levin_utility(&order);
        prop_assert_eq!(g.gap_violation(&order), None);
        for x in 0..n {
            for y in 0..n {
                if order.less_eq(x, y) {
                    prop_assert!(g.values[x] <= g.values[y]);
                }
            }
        }
    }

    #[test]
    fn balls_dominate_the_cutoff(seed in any::<u64>(), n in 2usize..=40) {
        let (cloud, order) = cloud_and_order(seed, n);
        let eps = epsilon_cutoff(&cloud, &order).unwrap();
        if !order.relation().is_empty() {
            prop_assert!(matches!(eps, Scale::Finite(e) if e > 0.0));
        }
        for x in 0..n {
            let ball = incomparability_ball(&cloud, &order, x).unwrap();
            prop_assert!(ball >= eps, "ball {} below cutoff {}", ball, eps);
        }
    }
}
