//! Closes a random DAG into a partial order and assigns an integer utility
//! that increases by at least one along every strict pair.

use isocone_lab::order_core::{levin_utility, transitive_closure, Relation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> anyhow::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let n = 12;
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| rng.gen_bool(0.2))
        .collect();
    let order = transitive_closure(&Relation::from_pairs(n, edges.iter().copied())?)?;
    let g = levin_utility(&order);
    println!("{} edges close to {} strict pairs", edges.len(), order.relation().len());
    println!("utility: {:?}", g.values);
    println!("gap violation: {:?}", g.gap_violation(&order));

    let cyclic = Relation::from_pairs(3, [(0, 1), (1, 2), (2, 0)])?;
    println!("closing a 3-cycle: {}", transitive_closure(&cyclic).unwrap_err());
    Ok(())
}
