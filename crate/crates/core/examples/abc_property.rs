//! The ABC check on a quasihyperbolic geodesic, and a doubled path that fails it.

use qhgeom::analysis::{abc_check, AbcParams};
use qhgeom::geodesics::{geodesic, SolverParams};
use qhgeom::metrics::MetricKind;
use qhgeom::{pt, Domain, PathPolyline};
use std::f64::consts::PI;

fn main() -> Result<(), qhgeom::Error> {
    let dom = Domain::twice_punctured_plane();
    let g = geodesic(&dom, MetricKind::Quasihyperbolic, pt(-1e-4, 2e-4), pt(3.0, -2.0), &SolverParams::default())?;
    let rep = abc_check(&dom, &g.path, AbcParams::quasihyperbolic(), &dom.complement_points())?;
    println!("k-geodesic: pass {} after {} circles", rep.pass, rep.circles_checked);

    let dstar = Domain::punctured_unit_disk();
    let doubled = PathPolyline::new(&dstar, vec![pt(0.01, 0.0), pt(1e-6, 0.0), pt(0.01, 0.0)])?;
    let rep = abc_check(&dstar, &doubled, AbcParams::new(PI, PI)?, &[pt(0.0, 0.0)])?;
    println!("doubled radial path: pass {}", rep.pass);
    if let Some(v) = rep.violation {
        println!("  witness circle about {} of radius {:.3e}, path reaches radius {:.3e}", v.center, v.d, v.rho_min);
    }
    Ok(())
}
