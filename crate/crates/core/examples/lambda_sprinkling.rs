//! Sprinkles a 1+1 Minkowski patch, builds the Λ-order, and reports the
//! Euclidean cutoff below which no two events are related.

use isocone_lab::lorentz::{boost_transform, lambda_order, LorentzPatch};
use isocone_lab::order_core::{epsilon_cutoff, incomparability_ball, MetricPointCloud, Scale};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> anyhow::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let patch = LorentzPatch::sprinkle(1000, &[(0.0, 4.0), (-2.0, 2.0)], &mut rng)?;
    let cloud = MetricPointCloud::euclidean(patch.coordinates())?;

    for lam in [0.1, 0.5, 1.0] {
        let order = lambda_order(&patch, lam)?;
        let eps = epsilon_cutoff(&cloud, &order)?;
        let balls: Vec<f64> = (0..patch.len())
            .filter_map(|x| incomparability_ball(&cloud, &order, x).ok().and_then(Scale::finite))
            .collect();
        let mean = balls.iter().sum::<f64>() / balls.len().max(1) as f64;
        println!(
            "Λ = {lam:<4} pairs = {:>7}  ε₀ = {eps:.4}  mean nearest comparable = {mean:.4}",
            order.relation().len()
        );
    }

    let order = lambda_order(&patch, 0.5)?;
    let boosted = lambda_order(&boost_transform(&patch, 1.2, 1)?, 0.5)?;
    println!("boost by rapidity 1.2 keeps the pair set: {}", order == boosted);
    Ok(())
}
