//! Exact distances where a closed form exists, solver intervals elsewhere.

use qhgeom::geodesics::{metric_distance, SolverParams};
use qhgeom::metrics::{closed_form_distance, MetricKind};
use qhgeom::{pt, Domain};

fn main() -> Result<(), qhgeom::Error> {
    let params = SolverParams::default();
    let cases = [
        ("C \\ {0}", Domain::punctured_plane(pt(0.0, 0.0)), MetricKind::Quasihyperbolic, pt(1.0, 0.0), pt(-2.0, 0.5)),
        ("unit disk", Domain::unit_disk(), MetricKind::Hyperbolic, pt(0.0, 0.0), pt(0.5, 0.5)),
        ("punctured disk", Domain::punctured_unit_disk(), MetricKind::Hyperbolic, pt(0.5, 0.0), pt(-0.1, 0.1)),
        ("C \\ {0, 1}", Domain::twice_punctured_plane(), MetricKind::Quasihyperbolic, pt(-1.0, 0.0), pt(0.5, 1.0)),
        ("C \\ {0, 1}", Domain::twice_punctured_plane(), MetricKind::Hyperbolic, pt(-1.0, 0.0), pt(0.5, 1.0)),
    ];
    for (name, dom, metric, a, b) in cases {
        let d = metric_distance(&dom, metric, a, b, &params)?;
        let tag = if closed_form_distance(&dom, metric, a, b)?.is_some() { "closed form" } else { "solver" };
        println!("{name:>15} {}({a}, {b}) in [{:.6}, {:.6}]  ({tag})", metric.symbol(), d.lower, d.upper);
    }
    Ok(())
}
