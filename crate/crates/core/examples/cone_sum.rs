//! Randomized search for `C(Λ₁) + C(Λ₂) ⊄ C(Λ)`; sums stay in the cone
//! exactly when `Λ₁ + Λ₂ ≥ Λ`.

use isocone_lab::lorentz::cone_sum_check;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> anyhow::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (l1, l2, lam) in [(0.5, 0.5, 1.0), (0.3, 0.4, 1.0), (1.0, 0.0, 0.9), (0.2, 0.2, 0.5)] {
        let verdict = cone_sum_check(l1, l2, lam, 3, 10_000, &mut rng)?;
        println!("Λ1={l1} Λ2={l2} Λ={lam}: {verdict:?}");
    }
    Ok(())
}
