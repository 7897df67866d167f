//! The Beardon–Pommerenke function β, its extremal annulus BP(z) and the enlarged annulus 𝒜(z).

use crate::domains::{Domain, Primitive};
use crate::error::{Error, Result};
use crate::geom::{Annulus, Point};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaReport {
    pub value: f64,
    pub zeta: Point,
    pub xi: Point,
    pub delta: f64,
    /// `A(ζ; δ(z), β(z))`; absent when β vanishes.
    pub bp_annulus: Option<Annulus>,
    /// `𝒜(z)`, possibly degenerate; absent when β vanishes.
    pub enlarged: Option<Annulus>,
}

/// Candidate value of `|log(δ/|ζ-ξ|)|` for one primitive, with its witness `ξ`.
fn primitive_candidate(p: &Primitive, zeta: Point, delta: f64, tol: f64) -> Option<(f64, Point)> {
    if let Primitive::Point(q) = *p {
        if (q - zeta).norm() <= tol {
            return None;
        }
        return Some((((q - zeta).norm() / delta).ln().abs(), q));
    }
    let (lo, hi, u) = p.radial_range(zeta);
    if lo <= delta && delta <= hi {
        Some((0.0, zeta + u * delta))
    } else if delta < lo {
        Some(((lo / delta).ln(), zeta + u * lo))
    } else {
        Some(((delta / hi).ln(), zeta + u * hi))
    }
}

fn lex_less(a: Point, b: Point) -> bool {
    a.re < b.re || (a.re == b.re && a.im < b.im)
}

fn minimize(dom: &Domain, z: Point) -> Result<(f64, Point, Point, f64)> {
    dom.require_hyperbolic()?;
    let delta = dom.delta(z)?;
    let tol = Domain::default_tol(delta);
    let mut best: Option<(f64, Point, Point)> = None;
    for p in dom.primitives() {
        if p.distance(z) > delta + tol {
            continue;
        }
        let zeta = p.nearest(z);
        for q in dom.primitives() {
            if let Some((v, xi)) = primitive_candidate(q, zeta, delta, tol) {
                let better = match best {
                    None => true,
                    Some((bv, bz, _)) => v < bv - 1e-12 || (v <= bv + 1e-12 && lex_less(zeta, bz)),
                };
                if better {
                    best = Some((v, zeta, xi));
                }
            }
        }
    }
    let (v, zeta, xi) = best.ok_or(Error::NotHyperbolic)?;
    Ok((v, zeta, xi, delta))
}

/// `β(z)` alone, without building annuli.
pub fn beta_value(dom: &Domain, z: Point) -> Result<f64> {
    minimize(dom, z).map(|r| r.0)
}

/// `β(z)` with witnesses `ζ ∈ B(z)` and `ξ`, plus BP(z) and 𝒜(z).
pub fn beta_at(dom: &Domain, z: Point) -> Result<BetaReport> {
    let (value, zeta, xi, delta) = minimize(dom, z)?;
    let (bp_annulus, enlarged) = if value > 0.0 {
        let bp = Annulus::new(zeta, delta, value)?;
        (Some(bp), Some(enlarge(dom, &bp)?))
    } else {
        (None, None)
    };
    Ok(BetaReport { value, zeta, xi, delta, bp_annulus, enlarged })
}

/// `BP(z) = A(ζ; δ(z), β(z))`.
pub fn bp_annulus(dom: &Domain, z: Point) -> Result<Annulus> {
    let r = beta_at(dom, z)?;
    let a = r.bp_annulus.ok_or(Error::NoAnnulus(z))?;
    if !dom.annulus_in_domain(&a).touches_one() {
        return Err(Error::Hypothesis(format!("extremal annulus at {z} fails the contact check")));
    }
    Ok(a)
}

/// `𝒜(z)`: BP(z) with each non-touching boundary circle pushed until it meets the complement.
pub fn enlarged_annulus(dom: &Domain, z: Point) -> Result<Annulus> {
    beta_at(dom, z)?.enlarged.ok_or(Error::NoAnnulus(z))
}

fn enlarge(dom: &Domain, bp: &Annulus) -> Result<Annulus> {
    let o = bp.center();
    let (r, big_r) = (bp.inner_radius(), bp.outer_radius());
    let rel = 1e-9;
    let mut eps = 0.0f64;
    let mut out = f64::INFINITY;
    for p in dom.primitives() {
        let (lo, hi, _) = p.radial_range(o);
        if hi <= r * (1.0 + rel) {
            eps = eps.max(hi);
        }
        if lo >= big_r * (1.0 - rel) {
            out = out.min(lo);
        }
    }
    let li = if eps >= r * (1.0 - rel) { bp.log_inner() } else { eps.ln() };
    let lo = if out <= big_r * (1.0 + rel) { bp.log_outer() } else { out.ln() };
    Annulus::from_log_radii(o, li, lo).map_err(|_| Error::NotHyperbolic)
}

/// Window `[lower, upper]` predicted for β at `z` in an annulus whose both circles meet the boundary.
pub fn beta_window_bounds(a: &Annulus, z: Point) -> Result<(f64, f64)> {
    let d = a
        .center_radius()
        .ok_or_else(|| Error::Hypothesis("the annulus must be proper".into()))?;
    let r = a.half_modulus();
    let log16 = 16f64.ln();
    if r <= log16 {
        return Err(Error::Hypothesis(format!("half modulus {r} must exceed log 16")));
    }
    let t = ((z - a.center()).norm() / d).ln();
    if t.abs() > r - log16 + 1e-12 {
        return Err(Error::Hypothesis(format!("|t| = {} exceeds r - log 16 = {}", t.abs(), r - log16)));
    }
    let s = r - t.abs();
    let upper = if t >= 0.0 { 2.0 * s } else { s + 2f64.ln() };
    Ok((0.5 * s, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{pt, AnnulusKind};
    use approx::assert_relative_eq;

    #[test]
    fn dstar_values() {
        let d = Domain::punctured_unit_disk();
        let r = beta_at(&d, pt(0.1, 0.0)).unwrap();
        assert_relative_eq!(r.value, 10f64.ln(), epsilon = 1e-14);
        assert_eq!(r.zeta, pt(0.0, 0.0));
        assert_relative_eq!(r.xi.norm(), 1.0);
        assert_eq!(beta_value(&d, pt(0.6, 0.0)).unwrap(), 0.0);
        assert!(matches!(bp_annulus(&d, pt(0.6, 0.0)), Err(Error::NoAnnulus(_))));
    }

    #[test]
    fn c01_witnesses() {
        let c = Domain::twice_punctured_plane();
        let r = beta_at(&c, pt(0.25, 0.0)).unwrap();
        assert_relative_eq!(r.value, 4f64.ln(), epsilon = 1e-14);
        assert_eq!(r.zeta, pt(0.0, 0.0));
        assert_eq!(r.xi, pt(1.0, 0.0));
        let bp = r.bp_annulus.unwrap();
        assert_relative_eq!(bp.inner_radius(), 0.0625, epsilon = 1e-14);
        assert_relative_eq!(bp.outer_radius(), 1.0, epsilon = 1e-14);
        let e = r.enlarged.unwrap();
        assert_eq!(e.kind(), AnnulusKind::PuncturedDisk);
        assert_relative_eq!(e.outer_radius(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn third_point_makes_enlargement_proper() {
        let c = Domain::punctured_at(&[pt(0.0, 0.0), pt(0.01, 0.0), pt(1.0, 0.0)]).unwrap();
        let e = enlarged_annulus(&c, pt(0.25, 0.0)).unwrap();
        assert!(e.is_proper());
        assert_eq!(e.center(), pt(0.01, 0.0));
        assert_relative_eq!(e.inner_radius(), 0.01, epsilon = 1e-14);
        assert_relative_eq!(e.outer_radius(), 0.99, epsilon = 1e-14);
        assert!(c.annulus_in_domain(&e).touches_both());
    }

    #[test]
    fn dstar_enlargement_is_degenerate() {
        let e = enlarged_annulus(&Domain::punctured_unit_disk(), pt(0.1, 0.0)).unwrap();
        assert_eq!(e.kind(), AnnulusKind::PuncturedDisk);
        assert_relative_eq!(e.outer_radius(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn disk_complement_enlargement() {
        // inner circle touches the hole, nothing outside
        let d = Domain::new(vec![
            Primitive::Circle { center: pt(0.0, 0.0), radius: 1.0, side: crate::domains::CircleSide::Hole },
            Primitive::Point(pt(0.0, 0.0)),
        ])
        .unwrap();
        let r = beta_at(&d, pt(4.0, 0.0)).unwrap();
        assert_relative_eq!(r.value, 1.5f64.ln(), epsilon = 1e-14);
        assert_eq!(r.enlarged.unwrap().kind(), AnnulusKind::DiskComplement);
    }

    #[test]
    fn simply_connected_domains_have_zero_beta() {
        assert_eq!(beta_value(&Domain::unit_disk(), pt(0.3, 0.2)).unwrap(), 0.0);
        assert_eq!(beta_value(&Domain::upper_half_plane(), pt(0.3, 0.2)).unwrap(), 0.0);
        assert!(matches!(beta_value(&Domain::punctured_plane(pt(0.0, 0.0)), pt(1.0, 0.0)), Err(Error::NotHyperbolic)));
    }

    #[test]
    fn beta_window_examples() {
        let a = Annulus::new(pt(0.0, 0.0), 1.0, 5.0).unwrap();
        let (l, u) = beta_window_bounds(&a, pt(1.0, 0.0)).unwrap();
        assert_relative_eq!(l, 2.5);
        assert_relative_eq!(u, 10.0);
        let (l, u) = beta_window_bounds(&a, pt((-2f64).exp(), 0.0)).unwrap();
        assert_relative_eq!(l, 1.5, epsilon = 1e-12);
        assert_relative_eq!(u, 3.0 + 2f64.ln(), epsilon = 1e-12);
        let t = 5.0 - 16f64.ln();
        let (l, u) = beta_window_bounds(&a, pt(t.exp(), 0.0)).unwrap();
        assert_relative_eq!(l, 0.5 * 16f64.ln(), epsilon = 1e-12);
        assert_relative_eq!(u, 2.0 * 16f64.ln(), epsilon = 1e-12);
        assert!(beta_window_bounds(&a, pt(4.0f64.exp(), 0.0)).is_err());
        assert!(beta_window_bounds(&Annulus::new(pt(0.0, 0.0), 1.0, 2.0).unwrap(), pt(1.0, 0.0)).is_err());
    }
}
