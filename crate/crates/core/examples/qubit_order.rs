//! The order on qubit pure states induced by a Bloch cap: `p ≤ q` when `q`
//! is at least as close as `p` to every point of the cap.

use isocone_lab::qubit_geometry::{cap_measure, qubit_order, CapRegion, SpherePoint};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> anyhow::Result<()> {
    let north = SpherePoint::north();
    let cap = CapRegion::cap(north, 30f64.to_radians())?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let area = cap_measure(&cap, &mut rng);
    println!("30° cap: {:.4} ± {:.4} sr", area.steradians, area.std_error);

    let equator = SpherePoint::from_angles(std::f64::consts::FRAC_PI_2, 0.0);
    let tilted = SpherePoint::from_angles(0.3, 0.0);
    for (name, p, q) in [
        ("south vs north", SpherePoint::south(), north),
        ("equator vs tilted", equator, tilted),
        ("two equator points", equator, SpherePoint::from_angles(std::f64::consts::FRAC_PI_2, 2.0)),
    ] {
        let d = qubit_order(&cap, &p, &q, 1.0)?;
        println!("{name:<20} {:?} (margins {:+.4}, {:+.4})", d.comparison, d.margin_le, d.margin_ge);
    }
    Ok(())
}
