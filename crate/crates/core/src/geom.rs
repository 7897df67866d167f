//! Planar primitives and the annulus algebra.

use crate::error::{Error, Result};
use num_complex::Complex64;

pub type Point = Complex64;

/// Shorthand constructor for a point.
pub fn pt(x: f64, y: f64) -> Point {
    Complex64::new(x, y)
}

/// Absolute tolerance for comparisons of log-radii.
pub const LOG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Result<Circle> {
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(Error::Parameter(format!("circle radius {radius}")));
        }
        Ok(Circle { center, radius })
    }

    pub fn point_at(&self, theta: f64) -> Point {
        self.center + Complex64::from_polar(self.radius, theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnnulusKind {
    Proper,
    PuncturedDisk,
    DiskComplement,
}

/// A round annulus `{r < |z - o| < R}`, possibly degenerate (`r = 0` or `R = ∞`).
///
/// Radii are kept as logarithms so that very large moduli stay representable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Annulus {
    center: Point,
    log_inner: f64,
    log_outer: f64,
}

impl Annulus {
    /// `A(o; d, m) = {d e^{-m} < |z - o| < d e^m}`.
    pub fn new(center: Point, d: f64, m: f64) -> Result<Annulus> {
        if !(d > 0.0 && d.is_finite()) || !(m > 0.0 && m.is_finite()) {
            return Err(Error::Parameter(format!("annulus with d={d}, m={m}")));
        }
        let ld = d.ln();
        Ok(Annulus { center, log_inner: ld - m, log_outer: ld + m })
    }

    pub fn from_log_radii(center: Point, log_inner: f64, log_outer: f64) -> Result<Annulus> {
        if log_inner.is_nan() || log_outer.is_nan() || log_inner >= log_outer {
            return Err(Error::Parameter(format!("annulus log radii {log_inner} >= {log_outer}")));
        }
        if log_inner == f64::NEG_INFINITY && log_outer == f64::INFINITY {
            return Err(Error::Parameter("annulus cannot be the punctured plane".into()));
        }
        Ok(Annulus { center, log_inner, log_outer })
    }

    pub fn from_radii(center: Point, r: f64, big_r: f64) -> Result<Annulus> {
        if !(r >= 0.0) || !(big_r > r) {
            return Err(Error::Parameter(format!("annulus radii {r}, {big_r}")));
        }
        Annulus::from_log_radii(center, r.ln(), big_r.ln())
    }

    /// `D_*(o; R)`.
    pub fn punctured_disk(center: Point, radius: f64) -> Result<Annulus> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Parameter(format!("punctured disk radius {radius}")));
        }
        Ok(Annulus { center, log_inner: f64::NEG_INFINITY, log_outer: radius.ln() })
    }

    /// `C \ D[o; R]`.
    pub fn disk_complement(center: Point, radius: f64) -> Result<Annulus> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Parameter(format!("disk complement radius {radius}")));
        }
        Ok(Annulus { center, log_inner: radius.ln(), log_outer: f64::INFINITY })
    }

    pub fn kind(&self) -> AnnulusKind {
        if self.log_inner == f64::NEG_INFINITY {
            AnnulusKind::PuncturedDisk
        } else if self.log_outer == f64::INFINITY {
            AnnulusKind::DiskComplement
        } else {
            AnnulusKind::Proper
        }
    }

    pub fn is_proper(&self) -> bool {
        self.kind() == AnnulusKind::Proper
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn log_inner(&self) -> f64 {
        self.log_inner
    }

    pub fn log_outer(&self) -> f64 {
        self.log_outer
    }

    pub fn inner_radius(&self) -> f64 {
        self.log_inner.exp()
    }

    pub fn outer_radius(&self) -> f64 {
        self.log_outer.exp()
    }

    /// Radius `d` of the center circle; `None` for degenerate annuli.
    pub fn center_radius(&self) -> Option<f64> {
        self.is_proper().then(|| (0.5 * (self.log_inner + self.log_outer)).exp())
    }

    /// `m`, with `md(A) = 2m`; infinite for degenerate annuli.
    pub fn half_modulus(&self) -> f64 {
        0.5 * self.modulus()
    }

    pub fn modulus(&self) -> f64 {
        self.log_outer - self.log_inner
    }

    pub fn center_circle(&self) -> Option<Circle> {
        self.center_radius().map(|d| Circle { center: self.center, radius: d })
    }

    pub fn inner_circle(&self) -> Option<Circle> {
        (self.log_inner > f64::NEG_INFINITY).then(|| Circle { center: self.center, radius: self.inner_radius() })
    }

    pub fn outer_circle(&self) -> Option<Circle> {
        (self.log_outer < f64::INFINITY).then(|| Circle { center: self.center, radius: self.outer_radius() })
    }

    /// `core_q(A)`: remove a collar of modulus `q` from each finite side.
    pub fn core(&self, q: f64) -> Result<Annulus> {
        if !(q > 0.0) {
            return Err(Error::Parameter(format!("core parameter q={q} must be positive")));
        }
        match self.kind() {
            AnnulusKind::Proper => {
                let m = self.half_modulus();
                if q >= m {
                    return Err(Error::Parameter(format!("core q={q} must be below the half modulus {m}")));
                }
                Ok(Annulus { center: self.center, log_inner: self.log_inner + q, log_outer: self.log_outer - q })
            }
            AnnulusKind::PuncturedDisk => Ok(Annulus { log_outer: self.log_outer - q, ..*self }),
            AnnulusKind::DiskComplement => Ok(Annulus { log_inner: self.log_inner + q, ..*self }),
        }
    }

    /// `band_r(A)`: add a collar of modulus `r` on each finite side.
    pub fn band(&self, r: f64) -> Result<Annulus> {
        if !(r > 0.0) {
            return Err(Error::Parameter(format!("band parameter r={r} must be positive")));
        }
        Ok(Annulus { center: self.center, log_inner: self.log_inner - r, log_outer: self.log_outer + r })
    }

    /// `band_r(S¹(o; d)) = A(o; d, r)`.
    pub fn band_of_circle(c: Circle, r: f64) -> Result<Annulus> {
        Annulus::new(c.center, c.radius, r)
    }

    fn log_dist(&self, z: Point) -> f64 {
        (z - self.center).norm().ln()
    }

    /// Open annulus membership.
    pub fn contains(&self, z: Point) -> bool {
        let l = self.log_dist(z);
        l > self.log_inner && l < self.log_outer
    }

    pub fn closure_contains(&self, z: Point) -> bool {
        let l = self.log_dist(z);
        l >= self.log_inner - LOG_TOL && l <= self.log_outer + LOG_TOL
    }

    /// Closed bounded complementary component `{|z - o| <= r}`; `{o}` for punctured disks.
    pub fn is_inside(&self, z: Point) -> bool {
        self.log_dist(z) <= self.log_inner
    }

    /// Closed unbounded complementary component `{|z - o| >= R}`; empty for disk complements.
    pub fn is_outside(&self, z: Point) -> bool {
        self.log_dist(z) >= self.log_outer
    }

    pub fn separates(&self, p: Point, q: Point) -> bool {
        (self.is_inside(p) && self.is_outside(q)) || (self.is_outside(p) && self.is_inside(q))
    }

    /// Number of times a polyline crosses the annulus, i.e. the largest `n` for
    /// which there are `n` non-overlapping subpaths each meeting both boundary circles.
    pub fn crossing_count(&self, path: &[Point]) -> usize {
        let (r, big_r) = (self.inner_radius(), self.outer_radius());
        if path.len() < 2 || r == 0.0 || big_r == f64::INFINITY {
            return 0;
        }
        let tol = 1e-12 * big_r;
        let mut events: Vec<bool> = Vec::new();
        let mut push = |outer: bool| {
            if events.last() != Some(&outer) {
                events.push(outer);
            }
        };
        let n = path.len();
        let rho0 = (path[0] - self.center).norm();
        if rho0 <= r + tol {
            push(false);
        } else if rho0 >= big_r - tol {
            push(true);
        }
        for (i, w) in path.windows(2).enumerate() {
            let (p0, p1) = (w[0] - self.center, w[1] - self.center);
            let (d0, d1) = (p0.norm(), p1.norm());
            if d0 > big_r {
                push(true);
            }
            if segment_min_norm(p0, p1) < r {
                push(false);
            }
            let last = i + 2 == n;
            if d1 > big_r || (last && d1 >= big_r - tol) {
                push(true);
            } else if last && d1 <= r + tol {
                push(false);
            }
        }
        events.len().saturating_sub(1)
    }

    /// Whether `inner` is a concentric subannulus of `outer` with closure inside it.
    pub fn is_concentric_subannulus(inner: &Annulus, outer: &Annulus) -> bool {
        if !inner.is_proper() {
            return false;
        }
        let scale = 1.0 + inner.outer_radius();
        (inner.center - outer.center).norm() <= 1e-12 * scale
            && inner.log_inner > outer.log_inner + LOG_TOL
            && inner.log_outer < outer.log_outer - LOG_TOL
    }

    /// Concentric containment allowing shared boundary circles.
    pub fn is_concentric_within(inner: &Annulus, outer: &Annulus) -> bool {
        let scale = 1.0 + inner.outer_radius().min(outer.outer_radius()).min(1e300);
        (inner.center - outer.center).norm() <= 1e-12 * scale
            && inner.log_inner >= outer.log_inner - LOG_TOL
            && inner.log_outer <= outer.log_outer + LOG_TOL
    }

    /// Whether two open annuli have empty intersection.
    pub fn disjoint(a: &Annulus, b: &Annulus) -> bool {
        // b lies in the closed hole of a, or in the closed exterior of a.
        let (r1, big_r1) = (a.inner_radius(), a.outer_radius());
        let (r2, big_r2) = (b.inner_radius(), b.outer_radius());
        let c = (a.center - b.center).norm();
        if big_r2.is_finite() && c + big_r2 <= r1 {
            return true;
        }
        if big_r1.is_infinite() {
            return false;
        }
        // distance from a's center to the nearest point of b
        let near = if c <= r2 {
            r2 - c
        } else if big_r2.is_finite() && c >= big_r2 {
            c - big_r2
        } else {
            0.0
        };
        near >= big_r1
    }

    /// Smallest parameter `s` in `[0, 1]` with `p0 + s (p1 - p0)` in the closed annulus.
    pub fn first_closure_param(&self, p0: Point, p1: Point) -> Option<f64> {
        let (r, big_r) = (self.inner_radius(), self.outer_radius());
        let a0 = p0 - self.center;
        let d = p1 - p0;
        let qa = d.norm_sqr();
        let qb = 2.0 * (d.conj() * a0).re;
        let qc = a0.norm_sqr();
        let rho = |s: f64| (a0 + d * s).norm();
        // roots carry cancellation error on the scale of the segment, not of the radii
        let eps = 1e-12 * (qc.sqrt() + qa.sqrt());
        let ok = |s: f64| {
            let v = rho(s);
            v >= r * (1.0 - 1e-12) - eps && v <= big_r * (1.0 + 1e-12) + eps
        };
        let mut cands = vec![0.0];
        for rad in [r, big_r] {
            if rad.is_finite() && rad > 0.0 && qa > 0.0 {
                let disc = qb * qb - 4.0 * qa * (qc - rad * rad);
                if disc >= 0.0 {
                    let sq = disc.sqrt();
                    for s in [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)] {
                        if (-1e-12..=1.0 + 1e-12).contains(&s) {
                            cands.push(s.clamp(0.0, 1.0));
                        }
                    }
                }
            }
        }
        cands.sort_by(|x, y| x.total_cmp(y));
        cands.into_iter().find(|&s| ok(s))
    }

    /// Largest parameter `s` in `[0, 1]` with the segment point in the closed annulus.
    pub fn last_closure_param(&self, p0: Point, p1: Point) -> Option<f64> {
        self.first_closure_param(p1, p0).map(|s| 1.0 - s)
    }
}

/// Distance from the origin to the segment `[p0, p1]`.
pub fn segment_min_norm(p0: Point, p1: Point) -> f64 {
    segment_point_distance(p0, p1, Complex64::new(0.0, 0.0))
}

/// Euclidean distance from `z` to the segment `[p0, p1]`.
pub fn segment_point_distance(p0: Point, p1: Point, z: Point) -> f64 {
    let d = p1 - p0;
    let l2 = d.norm_sqr();
    if l2 == 0.0 {
        return (z - p0).norm();
    }
    let s = ((z - p0) * d.conj()).re / l2;
    let s = s.clamp(0.0, 1.0);
    (p0 + d * s - z).norm()
}

/// Principal argument in `(-π, π]`.
pub fn arg(z: Point) -> f64 {
    let a = z.im.atan2(z.re);
    if a == -std::f64::consts::PI {
        std::f64::consts::PI
    } else {
        a
    }
}

/// Principal logarithm with `Arg ∈ (-π, π]`.
pub fn principal_log(z: Point) -> Point {
    Complex64::new(z.norm().ln(), arg(z))
}

/// Winding number of a closed polygon around `c` (the polygon is closed implicitly).
pub fn winding_number(poly: &[Point], c: Point) -> i64 {
    let n = poly.len();
    if n < 2 {
        return 0;
    }
    let mut total = 0.0;
    for i in 0..n {
        let u = poly[i] - c;
        let v = poly[(i + 1) % n] - c;
        total += (v / u).arg();
    }
    (total / (2.0 * std::f64::consts::PI)).round() as i64
}

/// Whether `c` lies in the closed triangle `(p, q, r)`.
pub fn triangle_contains(p: Point, q: Point, r: Point, c: Point) -> bool {
    let cross = |a: Point, b: Point, z: Point| ((b - a).conj() * (z - a)).im;
    let d1 = cross(p, q, c);
    let d2 = cross(q, r, c);
    let d3 = cross(r, p, c);
    let neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
    let pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
    !(neg && pos)
}

/// Euclidean length of a polyline.
pub fn euclidean_length(path: &[Point]) -> f64 {
    path.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
}
