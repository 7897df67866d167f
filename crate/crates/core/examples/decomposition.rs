//! Good/bad decomposition of a radial path through two deep annuli.

use qhgeom::analysis::{decompose_good_bad, DecompositionConfig};
use qhgeom::{pt, Domain, PathPolyline};

fn main() -> Result<(), qhgeom::Error> {
    let dom = Domain::punctured_at(&[pt(0.0, 0.0), pt(0.01, 0.0), pt(1.0, 0.0), pt(100.0, 0.0)])?;
    let path = PathPolyline::new(&dom, vec![pt(-0.01, 0.0), pt(-100.0, 0.0)])?;
    let rep = decompose_good_bad(&dom, &path, &path, &DecompositionConfig::desk())?;
    println!("n = {} bad arcs, structural checks pass: {}", rep.n, rep.structural_pass());
    for m in &rep.markers_h {
        println!("  {:>3} at x = {:.5}", m.label, m.point.re);
    }
    for s in &rep.subarcs_h {
        println!("  {:?} [{:.4}, {:.4}] l_k = {:.3}, max beta = {:.3}", s.kind, s.start, s.end, s.length_k, s.max_beta);
    }
    for c in &rep.checks {
        println!("  {:<28} {}", c.name, if c.pass { "ok" } else { "FAILED" });
    }

    // a path that runs into a degenerate enlarged annulus
    let c01 = Domain::twice_punctured_plane();
    let w = pt(-0.5, 0.75f64.sqrt());
    let bent = PathPolyline::new(&c01, vec![pt(-1.0, 0.0), pt(-0.001, 0.0), w])?;
    let rep = decompose_good_bad(&c01, &bent, &bent, &DecompositionConfig::desk())?;
    println!("\nC \\ {{0,1}}: degenerate annulus flagged: {}", rep.degenerate_annulus);
    Ok(())
}
