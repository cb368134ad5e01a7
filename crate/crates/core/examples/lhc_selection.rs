//! Lower hemi-continuity of cap-valued maps on [0, 1] and continuous
//! selections through them.

use isocone_lab::carrier::{build_selection, check_lhc, check_lhc_refined, LhcVerdict, LocalIsoconeMap};
use isocone_lab::qubit_geometry::{CapRegion, SpherePoint};

fn cap(deg: f64) -> CapRegion {
    CapRegion::cap(SpherePoint::north(), deg.to_radians()).expect("valid cap")
}

fn main() -> anyhow::Result<()> {
    let shrinking = LocalIsoconeMap::on_unit_interval(101, |t| if t < 0.5 { cap(60.0) } else { cap(15.0) })?;
    match check_lhc(&shrinking, 0.01, 1.0)? {
        LhcVerdict::Fail { x, neighbor, .. } => println!(
            "wide → narrow: fails at x = {} against x = {}",
            shrinking.cloud().points()[x][0],
            shrinking.cloud().points()[neighbor][0]
        ),
        LhcVerdict::Pass => println!("wide → narrow: passes"),
    }

    // A jump that persists under refinement is a genuine discontinuity.
    for (name, wide_left) in [("shrinking", true), ("expanding", false)] {
        let levels = [41, 81, 161]
            .iter()
            .map(|&n| {
                LocalIsoconeMap::on_unit_interval(n, |t| if (t <= 0.5 + 1e-12) == wide_left { cap(60.0) } else { cap(15.0) })
            })
            .collect::<Result<Vec<_>, _>>()?;
        println!("{name} jump under refinement: {:?}", check_lhc_refined(&levels, 1.5, 2.0)?);
    }

    let turning = LocalIsoconeMap::on_unit_interval(101, |t| {
        CapRegion::cap(SpherePoint::from_angles(t * std::f64::consts::FRAC_PI_2, 0.0), 0.5).expect("valid cap")
    })?;
    let f = build_selection(&turning, &SpherePoint::from_angles(1.2, 0.4), 1.0)?;
    println!(
        "selection through a turning cap: Lipschitz {:.4}, all values in their cones: {}",
        f.lipschitz,
        f.first_violation(&turning)?.is_none()
    );
    Ok(())
}
