//! Lists every two-level Λ-system for a block profile, e.g.
//! `cargo run --example enumerate_tables -- 2 2`.

use isocone_lab::multicomponent::{enumerate_valid_tables, reference_system};

fn main() -> anyhow::Result<()> {
    let profile: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let profile = if profile.is_empty() { vec![1, 2, 3] } else { profile };
    let tables = enumerate_valid_tables(&profile, 1.0)?;
    for (i, t) in tables.iter().take(5).enumerate() {
        println!("[{i}]\n{}", t.render());
    }
    println!("{} valid systems for profile {profile:?}", tables.len());
    if profile == [1, 2, 3] {
        println!("reference system included: {}", tables.contains(&reference_system(1.0)));
    }
    Ok(())
}
