//! Lexicographic sum ℂ ⊕ M₂ ⊕ M₃ ⊕ M₂ over a diamond of sites: the order
//! recovered from sampled cone elements matches the order defined by the
//! sites and local cones.

use isocone_lab::isocone_fd::{
    diamond_algebra, empirical_order, induced_order, random_state_pairs, sample_elements_with_generators,
    spectral_criterion,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> anyhow::Result<()> {
    let lex = diamond_algebra();
    let elems = sample_elements_with_generators(&lex, 200, 3, 2.0);
    println!("profile {:?}, {} sampled elements", lex.profile(), elems.len());

    let spectral = spectral_criterion(&lex, &elems)?;
    println!("spectral criterion holds: {}", spectral.passed());

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pairs = random_state_pairs(&lex, 200, &mut rng);
    let mut agree = 0;
    for (s, t) in &pairs {
        if induced_order(&lex, s, t, 2.0)? == empirical_order(&elems, s, t)?.comparison {
            agree += 1;
        }
    }
    println!("sampled and induced orders agree on {agree}/{} state pairs", pairs.len());
    Ok(())
}
