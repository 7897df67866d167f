//! Quasihyperbolic density and the two-sided hyperbolic density bound across C \ {0, 1}.

use qhgeom::metrics::{hyp_density, kappa, qh_density};
use qhgeom::{pt, Domain};

fn main() -> Result<(), qhgeom::Error> {
    let dom = Domain::twice_punctured_plane();
    println!("kappa = {:.12}, 1/kappa = {:.12}", kappa(), 1.0 / kappa());
    println!("{:>18} {:>12} {:>12} {:>12} {:>8}", "z", "k density", "h lower", "h upper", "ratio");
    for z in [pt(-1.0, 0.0), pt(0.5, 0.0), pt(0.5, 0.8660254), pt(0.01, 0.0), pt(-30.0, 4.0), pt(2.0, 1e-3)] {
        let k = qh_density(&dom, z)?;
        let h = hyp_density(&dom, z)?;
        println!("{:>18} {k:>12.5} {:>12.5} {:>12.5} {:>8.3}", format!("{z}"), h.lower, h.upper, h.upper / h.lower);
    }

    let disk = Domain::punctured_unit_disk();
    let z = pt(0.2, 0.0);
    let h = hyp_density(&disk, z)?;
    println!("\npunctured disk at {z}: exact h density {:.6} (interval width {})", h.lower, h.upper - h.lower);
    Ok(())
}
