//! β(z), the annulus that realizes it, and its enlargement, along a ray in C \ {0, 1, 100}.

use qhgeom::beta::{beta_at, beta_window_bounds};
use qhgeom::{pt, Annulus, Domain};

fn main() -> Result<(), qhgeom::Error> {
    let dom = Domain::punctured_at(&[pt(0.0, 0.0), pt(1.0, 0.0), pt(100.0, 0.0)])?;
    println!("{:>8} {:>8} {:>10} {:>22} {:>22}", "x", "beta", "delta", "BP(z) radii", "enlarged radii");
    for x in [1.5, 2.0, 5.0, 10.0, 20.0, 50.0, 80.0] {
        let r = beta_at(&dom, pt(-x, 0.0))?;
        let radii = |a: Option<Annulus>| a.map_or("-".to_string(), |a| format!("({:.3}, {:.3})", a.inner_radius(), a.outer_radius()));
        println!("{x:>8} {:>8.4} {:>10.4} {:>22} {:>22}", r.value, r.delta, radii(r.bp_annulus), radii(r.enlarged));
    }

    // a deep annulus whose boundary circles both touch the complement
    let far = 6.0f64;
    let deep = Domain::punctured_at(&[pt(0.0, 0.0), pt((-far).exp(), 0.0), pt(far.exp(), 0.0)])?;
    let a = Annulus::new(pt(0.0, 0.0), 1.0, far)?;
    println!("\nA(0; 1, {far}) inside: {}, touches both sides: {}", deep.annulus_in_domain(&a).inside, deep.annulus_in_domain(&a).touches_both());
    for t in [-3.0, 0.0, 3.0] {
        let z = pt(f64::exp(t), 0.0);
        let (lo, hi) = beta_window_bounds(&a, z)?;
        println!("t = {t:>4}: {lo:.3} <= beta = {:.3} <= {hi:.3}", beta_at(&deep, z)?.value);
    }
    Ok(())
}
