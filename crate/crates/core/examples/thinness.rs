//! Thinness of geodesic triangles in the punctured disk under both metrics.

use qhgeom::analysis::thinness_estimate;
use qhgeom::geodesics::SolverParams;
use qhgeom::metrics::MetricKind;
use qhgeom::{pt, Domain};

fn main() -> Result<(), qhgeom::Error> {
    let dom = Domain::punctured_unit_disk();
    let triangles = [
        [pt(0.5, 0.0), pt(-0.25, 0.43), pt(-0.25, -0.43)],
        [pt(0.05, 0.0), pt(0.7, 0.1), pt(0.3, -0.6)],
    ];
    for metric in [MetricKind::Hyperbolic, MetricKind::Quasihyperbolic] {
        let r = thinness_estimate(&dom, metric, &triangles, &SolverParams::default())?;
        println!(
            "{}: max thinness {:.4}, refined {:.4}, relative change {:.2e}",
            metric.symbol(),
            r.max_thinness,
            r.max_thinness_refined,
            r.refinement_change
        );
    }
    Ok(())
}
