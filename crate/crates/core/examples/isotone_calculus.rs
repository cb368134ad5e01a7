use isocone_lab::hermitian::{apply_isotone, random_hermitian, spec_bounds, IsotoneFunction};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// An increasing function moves the spectral edges of `H` exactly where it
/// moves the numbers themselves.
fn main() -> anyhow::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let f = IsotoneFunction::new(vec![-1.0, 0.0, 2.0], vec![-3.0, 0.0, 0.5], 2.0, 0.0)?;
    for dim in [2, 4, 6] {
        let h = random_hermitian(&mut rng, dim, 2.0);
        let (lo, hi) = spec_bounds(&h);
        let (flo, fhi) = spec_bounds(&apply_isotone(&h, &f));
        println!(
            "dim {dim}: σ ⊂ [{lo:+.4}, {hi:+.4}]  f(σ) ⊂ [{flo:+.4}, {fhi:+.4}]  errors {:.1e} {:.1e}",
            (flo - f.eval(lo)).abs(),
            (fhi - f.eval(hi)).abs()
        );
    }
    Ok(())
}
