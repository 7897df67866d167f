//! Length-comparison and bad-arc certificates.

use qhgeom::analysis::{bad_arc_q, certify_bad_arc_ratios, certify_length_comparison, Ceilings};
use qhgeom::geodesics::SolverParams;
use qhgeom::{pt, Annulus, Domain};

fn show(b: Option<f64>) -> String {
    b.map_or("none".into(), |v| v.to_string())
}

fn main() -> Result<(), qhgeom::Error> {
    let params = SolverParams::default();
    let dstar = Domain::punctured_unit_disk();
    let rep = certify_length_comparison(&dstar, pt(0.6, 0.0), pt(-0.05, 0.02), &params, &Ceilings::default())?;
    println!(
        "punctured disk: l_k(h-geodesic)/k in [{:.4}, {:.4}] (bound {}), l_h(k-geodesic)/h in [{:.4}, {:.4}] (bound {}), pass {}",
        rep.ratio_k[0], rep.ratio_k[1], show(rep.k_bound), rep.ratio_h[0], rep.ratio_h[1], show(rep.h_bound), rep.pass
    );

    let far = 100.0f64;
    let dom = Domain::punctured_at(&[pt(0.0, 0.0), pt((-far).exp(), 0.0), pt(far.exp(), 0.0)])?;
    let a = Annulus::new(pt(0.0, 0.0), 1.0, far)?;
    let sigma = Annulus::new(pt(0.0, 0.0), 1.0, 1.0)?;
    let r = certify_bad_arc_ratios(&dom, &a, bad_arc_q(1.0), &sigma, 1.0, 6, 3, &params, 0.05)?;
    println!(
        "bad arc: k(a, b) in [{:.4}, {:.4}], k/k ratio in [{:.3}, {:.3}], sandwich {}, pass {}",
        r.k_distance[0], r.k_distance[1], r.kk_ratio[0], r.kk_ratio[1], r.sandwich_pass, r.pass
    );
    Ok(())
}
