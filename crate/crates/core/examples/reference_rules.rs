//! Checks the hand-built three-block Λ-system against the six rules and
//! shows how two small edits break it.

use isocone_lab::multicomponent::{reference_system, validate_rules, Cell};

fn main() -> anyhow::Result<()> {
    let system = reference_system(1.0);
    print!("{}", system.render());
    println!("{}\n", validate_rules(&system)?);

    let mut flat = system.clone();
    flat.lambda[1][1] = 0.0;
    println!("with Λ22 = 0:            {}", validate_rules(&flat)?);

    let mut moved = system;
    moved.partition[0][1] = Cell::Po;
    println!("with (1,2) moved to P°:  {}", validate_rules(&moved)?);
    Ok(())
}
