//! Metric densities, path lengths and closed-form distances.

use crate::beta::beta_value;
use crate::domains::{Domain, ModelTag};
use crate::error::{Error, Result};
use crate::geom::{principal_log, pt, Point};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// `Γ(1/4)`.
pub const GAMMA_QUARTER: f64 = 3.625_609_908_221_908_3;

/// `κ = Γ(1/4)^4 / (4π²)`.
pub fn kappa() -> f64 {
    GAMMA_QUARTER.powi(4) / (4.0 * PI * PI)
}

/// `μ_o = 3κ`, the hyperbolic bounce parameter.
pub fn mu_o() -> f64 {
    3.0 * kappa()
}

/// `ε_o = log(3/2)`.
pub fn eps_o() -> f64 {
    1.5f64.ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MetricKind {
    #[serde(rename = "k")]
    Quasihyperbolic,
    #[serde(rename = "h")]
    Hyperbolic,
}

impl MetricKind {
    pub fn parse(s: &str) -> Result<MetricKind> {
        match s {
            "k" | "quasihyperbolic" => Ok(MetricKind::Quasihyperbolic),
            "h" | "hyperbolic" => Ok(MetricKind::Hyperbolic),
            other => Err(Error::Parameter(format!("unknown metric {other}"))),
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            MetricKind::Quasihyperbolic => "k",
            MetricKind::Hyperbolic => "h",
        }
    }
}

/// Two-sided value of a density or a length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityInterval {
    #[serde(serialize_with = "crate::report::real")]
    pub lower: f64,
    #[serde(serialize_with = "crate::report::real")]
    pub upper: f64,
    pub exact: bool,
}

pub type LengthInterval = DensityInterval;

impl DensityInterval {
    pub fn exact(v: f64) -> DensityInterval {
        DensityInterval { lower: v, upper: v, exact: true }
    }

    pub fn contains(&self, v: f64, rel: f64) -> bool {
        v >= self.lower * (1.0 - rel) && v <= self.upper * (1.0 + rel)
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// A polyline whose closed segments lie in a domain.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPolyline {
    vertices: Vec<Point>,
}

impl PathPolyline {
    pub fn new(dom: &Domain, vertices: Vec<Point>) -> Result<PathPolyline> {
        if vertices.len() < 2 {
            return Err(Error::Parameter("a path needs at least two vertices".into()));
        }
        for (i, w) in vertices.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(Error::Parameter(format!("vertices {i} and {} coincide", i + 1)));
            }
            if !(dom.segment_clearance(w[0], w[1]) > 0.0) {
                return Err(Error::PathOutside(i));
            }
        }
        Ok(PathPolyline { vertices })
    }

    /// Wraps vertices already known to be valid, dropping consecutive duplicates.
    pub fn from_trusted(mut vertices: Vec<Point>) -> PathPolyline {
        vertices.dedup();
        PathPolyline { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    pub fn start(&self) -> Point {
        self.vertices[0]
    }

    pub fn end(&self) -> Point {
        *self.vertices.last().unwrap()
    }

    pub fn reversed(&self) -> PathPolyline {
        let mut v = self.vertices.clone();
        v.reverse();
        PathPolyline { vertices: v }
    }

    pub fn euclidean_length(&self) -> f64 {
        crate::geom::euclidean_length(&self.vertices)
    }

    /// Point at global parameter `s ∈ [0, n-1]` (segment index plus local fraction).
    pub fn at(&self, s: f64) -> Point {
        let n = self.vertices.len();
        let s = s.clamp(0.0, (n - 1) as f64);
        let i = (s.floor() as usize).min(n - 2);
        let t = s - i as f64;
        self.vertices[i] + (self.vertices[i + 1] - self.vertices[i]) * t
    }

    /// Vertices of the subpath between global parameters `s0 <= s1`.
    pub fn sub_vertices(&self, s0: f64, s1: f64) -> Vec<Point> {
        let mut out = vec![self.at(s0)];
        let first = s0.floor() as usize + 1;
        let last = s1.ceil() as usize;
        for i in first..last.min(self.vertices.len()) {
            if (i as f64) > s0 && (i as f64) < s1 {
                out.push(self.vertices[i]);
            }
        }
        out.push(self.at(s1));
        out.dedup();
        out
    }
}

/// `1/δ(z)`.
pub fn qh_density(dom: &Domain, z: Point) -> Result<f64> {
    Ok(1.0 / dom.delta(z)?)
}

/// Hyperbolic density: exact on model domains, the two-sided estimate elsewhere.
pub fn hyp_density(dom: &Domain, z: Point) -> Result<DensityInterval> {
    dom.require_hyperbolic()?;
    match exact_hyp_density(dom, z)? {
        Some(v) => Ok(DensityInterval::exact(v)),
        None => bpt_interval(dom, z),
    }
}

fn exact_hyp_density(dom: &Domain, z: Point) -> Result<Option<f64>> {
    let delta = dom.delta(z)?;
    Ok(match dom.model() {
        Some(ModelTag::UnitDisk) => Some(2.0 / (1.0 - z.norm_sqr())),
        Some(ModelTag::HalfPlane { .. }) => Some(1.0 / delta),
        Some(m @ (ModelTag::PuncturedUnitDisk | ModelTag::PuncturedDisk { .. })) => {
            let (o, r) = m.punctured_disk_params().unwrap();
            let s = (z - o).norm();
            Some(1.0 / (s * (r / s).ln()))
        }
        Some(ModelTag::DiskComplement { o, r }) => {
            let s = (z - o).norm();
            Some(1.0 / (s * (s / r).ln()))
        }
        Some(ModelTag::Annulus { o, d, m }) => {
            let s = (z - o).norm();
            let x = (s / d).ln();
            Some(PI / (2.0 * m * s * (PI * x / (2.0 * m)).cos()))
        }
        _ => None,
    })
}

/// The general two-sided bound `1/(δ(κ+β)) <= λ <= min((π/2)/(δβ), 2/δ)`.
pub fn bpt_interval(dom: &Domain, z: Point) -> Result<DensityInterval> {
    let delta = dom.delta(z)?;
    let beta = beta_value(dom, z)?;
    Ok(bpt_from(delta, beta))
}

pub(crate) fn bpt_from(delta: f64, beta: f64) -> DensityInterval {
    let lower = 1.0 / (delta * (kappa() + beta));
    let disk = 2.0 / delta;
    let upper = if beta > 0.0 { (0.5 * PI / (delta * beta)).min(disk) } else { disk };
    DensityInterval { lower, upper, exact: false }
}

/// Which density a scalar evaluation should use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Lower,
    Upper,
}

/// A scalar density for one metric and one side of the interval.
pub fn scalar_density(dom: &Domain, metric: MetricKind, bound: Bound, z: Point) -> Result<f64> {
    match metric {
        MetricKind::Quasihyperbolic => qh_density(dom, z),
        MetricKind::Hyperbolic => {
            let d = hyp_density(dom, z)?;
            Ok(match bound {
                Bound::Lower => d.lower,
                Bound::Upper => d.upper,
            })
        }
    }
}

/// Whether the hyperbolic density is known exactly on this domain.
pub fn has_exact_hyp_density(dom: &Domain) -> bool {
    matches!(
        dom.model(),
        Some(
            ModelTag::UnitDisk
                | ModelTag::HalfPlane { .. }
                | ModelTag::PuncturedUnitDisk
                | ModelTag::PuncturedDisk { .. }
                | ModelTag::DiskComplement { .. }
                | ModelTag::Annulus { .. }
        )
    )
}

const GL_X: [f64; 4] = [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
const GL_W: [f64; 4] = [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];

fn gl8<F: FnMut(Point) -> Result<(f64, f64)>>(p0: Point, p1: Point, f: &mut F) -> Result<(f64, f64)> {
    let mid = (p0 + p1) * 0.5;
    let half = (p1 - p0) * 0.5;
    let h = half.norm();
    let (mut lo, mut hi) = (0.0, 0.0);
    for i in 0..4 {
        for sgn in [-1.0, 1.0] {
            let (a, b) = f(mid + half * (sgn * GL_X[i]))?;
            lo += GL_W[i] * a;
            hi += GL_W[i] * b;
        }
    }
    Ok((lo * h, hi * h))
}

fn adaptive<F: FnMut(Point) -> Result<(f64, f64)>>(
    p0: Point,
    p1: Point,
    whole: (f64, f64),
    tol: f64,
    depth: u32,
    f: &mut F,
) -> Result<(f64, f64)> {
    let m = (p0 + p1) * 0.5;
    let l = gl8(p0, m, f)?;
    let r = gl8(m, p1, f)?;
    let halves = (l.0 + r.0, l.1 + r.1);
    let close = |a: f64, b: f64| (a - b).abs() <= tol * b.abs() || a == b;
    if depth == 0 || (close(whole.0, halves.0) && close(whole.1, halves.1)) {
        return Ok(halves);
    }
    let a = adaptive(p0, m, l, tol, depth - 1, f)?;
    let b = adaptive(m, p1, r, tol, depth - 1, f)?;
    Ok((a.0 + b.0, a.1 + b.1))
}

/// Adaptive 8-point Gauss–Legendre integral of a pair of densities along a segment.
pub fn integrate_segment<F: FnMut(Point) -> Result<(f64, f64)>>(p0: Point, p1: Point, tol: f64, mut f: F) -> Result<(f64, f64)> {
    if p0 == p1 {
        return Ok((0.0, 0.0));
    }
    let whole = gl8(p0, p1, &mut f)?;
    adaptive(p0, p1, whole, tol, 24, &mut f)
}

/// Relative tolerance of length quadrature.
pub const QUAD_TOL: f64 = 1e-8;

/// Integral of a scalar density along a polyline (segments are not validated).
pub fn polyline_integral<F: FnMut(Point) -> Result<f64>>(vertices: &[Point], tol: f64, mut f: F) -> Result<f64> {
    let mut total = 0.0;
    for w in vertices.windows(2) {
        total += integrate_segment(w[0], w[1], tol, |z| f(z).map(|v| (v, v)))?.0;
    }
    Ok(total)
}

/// Metric length of a polyline; an interval for the hyperbolic metric on general domains.
pub fn path_length(dom: &Domain, path: &PathPolyline, metric: MetricKind) -> Result<LengthInterval> {
    path_length_tol(dom, path.vertices(), metric, QUAD_TOL)
}

pub fn path_length_tol(dom: &Domain, vertices: &[Point], metric: MetricKind, tol: f64) -> Result<LengthInterval> {
    if metric == MetricKind::Hyperbolic {
        dom.require_hyperbolic()?;
    }
    let exact = metric == MetricKind::Quasihyperbolic || has_exact_hyp_density(dom);
    let (mut lo, mut hi) = (0.0, 0.0);
    for (i, w) in vertices.windows(2).enumerate() {
        if !(dom.segment_clearance(w[0], w[1]) > 0.0) {
            return Err(Error::PathOutside(i));
        }
        let (a, b) = integrate_segment(w[0], w[1], tol, |z| match metric {
            MetricKind::Quasihyperbolic => qh_density(dom, z).map(|v| (v, v)),
            MetricKind::Hyperbolic => hyp_density(dom, z).map(|d| (d.lower, d.upper)),
        })?;
        lo += a;
        hi += b;
    }
    Ok(DensityInterval { lower: lo, upper: if exact { lo } else { hi }, exact })
}

/// `|Log((b-o)/(a-o))|`, the quasihyperbolic distance of `C \ {o}`.
pub fn kstar(a: Point, b: Point, o: Point) -> f64 {
    principal_log((b - o) / (a - o)).norm()
}

/// Hyperbolic distance in the unit disk.
pub fn h_disk(a: Point, b: Point) -> f64 {
    let q = ((a - b) / (pt(1.0, 0.0) - a.conj() * b)).norm();
    2.0 * q.min(1.0).atanh()
}

/// `arcosh(1 + t)` without cancellation.
fn arcosh1p(t: f64) -> f64 {
    2.0 * (0.5 * t).sqrt().asinh()
}

/// Hyperbolic distance in the half-plane `{Re w < 0}` with density `1/|Re w|`.
fn h_left_half_plane(w1: Point, w2: Point) -> f64 {
    arcosh1p((w1 - w2).norm_sqr() / (2.0 * w1.re.abs() * w2.re.abs()))
}

/// Largest deck shift tried in covering-space distance formulas.
pub const DECK_SHIFTS: i32 = 16;

/// Hyperbolic distance in the punctured unit disk via the logarithmic covering.
pub fn h_dstar(a: Point, b: Point) -> f64 {
    let w1 = principal_log(a);
    let w2 = principal_log(b);
    (-DECK_SHIFTS..=DECK_SHIFTS)
        .map(|k| h_left_half_plane(w1, w2 + pt(0.0, 2.0 * PI * k as f64)))
        .fold(f64::INFINITY, f64::min)
}

/// Hyperbolic distance in `A(o; d, m)` via the strip covering.
pub fn h_annulus(a: Point, b: Point, o: Point, d: f64, m: f64) -> f64 {
    let lift = |z: Point| principal_log((z - o) / d);
    let to_rhp = |w: Point| (pt(0.0, PI / (2.0 * m)) * w).exp();
    let s1 = to_rhp(lift(a));
    let w2 = lift(b);
    (-DECK_SHIFTS..=DECK_SHIFTS)
        .map(|k| {
            let s2 = to_rhp(w2 + pt(0.0, 2.0 * PI * k as f64));
            arcosh1p((s1 - s2).norm_sqr() / (2.0 * s1.re * s2.re))
        })
        .fold(f64::INFINITY, f64::min)
}

/// Exact distance when the domain and metric admit a closed form.
pub fn closed_form_distance(dom: &Domain, metric: MetricKind, a: Point, b: Point) -> Result<Option<f64>> {
    dom.delta(a)?;
    dom.delta(b)?;
    if metric == MetricKind::Hyperbolic {
        dom.require_hyperbolic()?;
    }
    let model = match dom.model() {
        Some(m) => m,
        None => return Ok(None),
    };
    Ok(match (metric, model) {
        (MetricKind::Quasihyperbolic, ModelTag::PuncturedPlane { o }) => Some(kstar(a, b, o)),
        (MetricKind::Quasihyperbolic, m @ (ModelTag::PuncturedUnitDisk | ModelTag::PuncturedDisk { .. })) => {
            let (o, r) = m.punctured_disk_params().unwrap();
            ((a - o).norm() <= 0.5 * r && (b - o).norm() <= 0.5 * r).then(|| kstar(a, b, o))
        }
        (_, ModelTag::HalfPlane { .. }) => {
            let (ya, yb) = (dom.delta(a)?, dom.delta(b)?);
            Some(arcosh1p((a - b).norm_sqr() / (2.0 * ya * yb)))
        }
        (MetricKind::Hyperbolic, ModelTag::UnitDisk) => Some(h_disk(a, b)),
        (MetricKind::Hyperbolic, m @ (ModelTag::PuncturedUnitDisk | ModelTag::PuncturedDisk { .. })) => {
            let (o, r) = m.punctured_disk_params().unwrap();
            Some(h_dstar((a - o) / r, (b - o) / r))
        }
        (MetricKind::Hyperbolic, ModelTag::DiskComplement { o, r }) => Some(h_dstar(r / (a - o), r / (b - o))),
        (MetricKind::Hyperbolic, ModelTag::Annulus { o, d, m }) => Some(h_annulus(a, b, o, d, m)),
        _ => None,
    })
}

/// Lower bounds for the quasihyperbolic distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GehringPalka {
    /// `j(a,b) = log(1 + |a-b| / min(δ(a), δ(b)))`.
    pub j: f64,
    /// `|log(δ(a)/δ(b))|`.
    pub delta_ratio: f64,
}

pub fn gehring_palka_lower(dom: &Domain, a: Point, b: Point) -> Result<GehringPalka> {
    let (da, db) = (dom.delta(a)?, dom.delta(b)?);
    Ok(GehringPalka { j: (1.0 + (a - b).norm() / da.min(db)).ln(), delta_ratio: (da / db).ln().abs() })
}

/// `|log(|a-o| / |b-o|)|` for a complement point `o`.
pub fn log_bound_about(dom: &Domain, a: Point, b: Point, o: Point) -> Result<f64> {
    if dom.contains(o) {
        return Err(Error::Parameter("the reference point must lie in the complement".into()));
    }
    dom.delta(a)?;
    dom.delta(b)?;
    Ok(((a - o).norm() / (b - o).norm()).ln().abs())
}

/// Pulled-back quasihyperbolic density of the inverted domain: `|T'(z)| / δ'(1/z)` for `T(z) = 1/z`.
pub fn inverted_qh_density(inverted: &Domain, z: Point) -> Result<f64> {
    let w = 1.0 / z;
    Ok(1.0 / (z.norm_sqr() * inverted.delta(w)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::pt;
    use approx::assert_relative_eq;

    #[test]
    fn kappa_value() {
        let k = kappa();
        assert!((4.3768792..=4.3768793).contains(&k), "{k}");
    }

    #[test]
    fn densities() {
        let d = Domain::punctured_unit_disk();
        assert_relative_eq!(qh_density(&d, pt(0.3, 0.0)).unwrap(), 1.0 / 0.3);
        assert_relative_eq!(qh_density(&Domain::punctured_plane(pt(0.0, 0.0)), pt(5.0, 0.0)).unwrap(), 0.2);
        let v = hyp_density(&d, pt(0.1, 0.0)).unwrap();
        assert!(v.exact);
        assert_relative_eq!(v.lower, 4.342944819032518, epsilon = 1e-12);
        assert_relative_eq!(hyp_density(&Domain::unit_disk(), pt(0.0, 0.0)).unwrap().lower, 2.0);
        let c = hyp_density(&Domain::twice_punctured_plane(), pt(-1.0, 0.0)).unwrap();
        assert!(!c.exact);
        assert_relative_eq!(c.lower, 1.0 / kappa(), epsilon = 1e-14);
        assert!(hyp_density(&Domain::punctured_plane(pt(0.0, 0.0)), pt(1.0, 0.0)).is_err());
    }

    #[test]
    fn annulus_density_on_center_circle() {
        let a = Domain::annulus(pt(0.0, 0.0), 1.0, 2.0).unwrap();
        assert_relative_eq!(hyp_density(&a, pt(0.0, 1.0)).unwrap().lower, PI / 4.0, epsilon = 1e-12);
    }

    #[test]
    fn lengths() {
        let c = Domain::punctured_plane(pt(0.0, 0.0));
        let p = PathPolyline::new(&c, vec![pt(1.0, 0.0), pt(1f64.exp(), 0.0)]).unwrap();
        assert_relative_eq!(path_length(&c, &p, MetricKind::Quasihyperbolic).unwrap().lower, 1.0, epsilon = 1e-10);
        let d = Domain::punctured_unit_disk();
        let p = PathPolyline::new(&d, vec![pt(0.1, 0.0), pt(0.4, 0.0)]).unwrap();
        assert_relative_eq!(path_length(&d, &p, MetricKind::Quasihyperbolic).unwrap().lower, 4f64.ln(), epsilon = 1e-10);
        assert!(PathPolyline::new(&d, vec![pt(-0.1, 0.0), pt(0.4, 0.0)]).is_err());
    }

    #[test]
    fn closed_forms() {
        let c = Domain::punctured_plane(pt(0.0, 0.0));
        let b = pt(1.0, PI / 2.0).exp();
        let k = closed_form_distance(&c, MetricKind::Quasihyperbolic, pt(1.0, 0.0), b).unwrap().unwrap();
        assert_relative_eq!(k, (1.0 + PI * PI / 4.0).sqrt(), epsilon = 1e-14);
        assert_relative_eq!(k, 1.86210, epsilon = 1e-5);
        let d = Domain::punctured_unit_disk();
        let h = closed_form_distance(&d, MetricKind::Hyperbolic, pt(0.1, 0.0), pt(0.4, 0.0)).unwrap().unwrap();
        assert_relative_eq!(h, (10f64.ln() / 2.5f64.ln()).ln(), epsilon = 1e-12);
        let h = closed_form_distance(&Domain::unit_disk(), MetricKind::Hyperbolic, pt(0.0, 0.0), pt(0.5, 0.0)).unwrap().unwrap();
        assert_relative_eq!(h, 3f64.ln(), epsilon = 1e-12);
        assert!(closed_form_distance(&Domain::twice_punctured_plane(), MetricKind::Quasihyperbolic, pt(2.0, 0.0), pt(3.0, 0.0))
            .unwrap()
            .is_none());
    }

    #[test]
    fn lower_bounds() {
        let d = Domain::punctured_unit_disk();
        let g = gehring_palka_lower(&d, pt(0.1, 0.0), pt(0.4, 0.0)).unwrap();
        assert_relative_eq!(g.j, 4f64.ln(), epsilon = 1e-12);
        assert_eq!(gehring_palka_lower(&d, pt(0.1, 0.0), pt(0.1, 0.0)).unwrap().j, 0.0);
        let c = Domain::punctured_plane(pt(0.0, 0.0));
        assert_relative_eq!(log_bound_about(&c, pt(1.0, 0.0), pt(4.0, 0.0), pt(0.0, 0.0)).unwrap(), 4f64.ln());
    }
}
