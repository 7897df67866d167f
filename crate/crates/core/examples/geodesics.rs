//! Geodesics: log spirals in C \ {0}, exact hyperbolic arcs, and the grid solver on C \ {0, 1}.

use qhgeom::geodesics::{chi_length, geodesic, log_spiral, spiral_euclidean_length, SolverParams};
use qhgeom::metrics::MetricKind;
use qhgeom::{pt, Domain};

fn main() -> Result<(), qhgeom::Error> {
    let (a, b) = (pt(1.0, 0.0), pt(-0.3, 2.0));
    let spiral = log_spiral(a, b, pt(0.0, 0.0), 8);
    println!("spiral from {a} to {b}: {} samples, euclidean length {:.5}, chord {:.5}", spiral.len(), spiral_euclidean_length(a, b), (a - b).norm());
    println!("circular-arc-segment path about 0: {:.5}", chi_length(a, b, pt(0.0, 0.0)));

    let params = SolverParams::default();
    let dstar = Domain::punctured_unit_disk();
    let g = geodesic(&dstar, MetricKind::Hyperbolic, pt(0.5, 0.0), pt(-0.5, 0.1), &params)?;
    println!("\npunctured disk h-geodesic: method {:?}, length {:.6}, {} vertices", g.method, g.length.lower, g.path.vertices().len());

    let c01 = Domain::twice_punctured_plane();
    for metric in [MetricKind::Quasihyperbolic, MetricKind::Hyperbolic] {
        let g = geodesic(&c01, metric, pt(-1.0, 0.0), pt(0.5, 1.0), &params)?;
        println!(
            "C \\ {{0,1}} {}-geodesic: length in [{:.5}, {:.5}], grid spacing {}, {} vertices",
            metric.symbol(),
            g.length.lower,
            g.length.upper,
            g.grid_spacing.map_or("-".into(), |h| format!("{h:.4}")),
            g.path.vertices().len()
        );
    }
    Ok(())
}
