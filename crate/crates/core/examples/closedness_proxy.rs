//! The `[0, 1]` order `x ≺ y ⇔ y − x ≥ λ(x)`: a continuous λ gives a
//! closed relation, a jump in λ leaves a limit point outside it.

use isocone_lab::order_core::{closedness_proxy, lambda_order_1d};

fn main() -> anyhow::Result<()> {
    let grid: Vec<f64> = (0..=40).map(|i| i as f64 / 40.0).collect();
    let smooth = |x: f64| 0.1 + 0.05 * x;
    let jump = |x: f64| if x < 0.5 { 0.1 } else { 0.3 };

    let sampled = lambda_order_1d(&grid, &grid.iter().map(|&x| smooth(x)).collect::<Vec<_>>())?;
    println!("smooth λ: {}", sampled.report);
    let spacings = [1e-2, 1e-3, 1e-4];
    println!("smooth λ closed: {}", closedness_proxy(&grid, smooth, &spacings, 1e-6).passed());
    let report = closedness_proxy(&grid, jump, &spacings, 1e-6);
    println!("jumping λ closed: {} (witness {:?})", report.passed(), report.witness);
    Ok(())
}
