//! Geodesics: closed-form constructions, a grid shortest-path solver with
//! polyline relaxation, circular-arc-segment paths and chordarc surgery.

use crate::domains::{Domain, ModelTag};
use crate::error::{Error, Result};
use crate::geom::{principal_log, pt, triangle_contains, winding_number, Annulus, Point};
use crate::metrics::{
    closed_form_distance, hyp_density, path_length_tol, qh_density, Bound, DensityInterval, LengthInterval, MetricKind,
    PathPolyline, QUAD_TOL,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverParams {
    /// Initial grid spacing as a fraction of `min(δ(a), δ(b))`.
    pub initial_spacing: f64,
    pub refine_factor: f64,
    pub max_refinements: u32,
    pub boundary_margin_cells: u32,
    pub neighbor_stencil: u32,
    pub convergence_rel_tol: f64,
    /// Upper bound on grid nodes; the spacing is coarsened to respect it.
    pub max_nodes: usize,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            initial_spacing: 0.25,
            refine_factor: 0.5,
            max_refinements: 3,
            boundary_margin_cells: 2,
            neighbor_stencil: 16,
            convergence_rel_tol: 1e-3,
            max_nodes: 12_000,
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Parameter(m.to_string()));
        if !(self.initial_spacing > 0.0) {
            return bad("initial_spacing must be positive");
        }
        if !(self.refine_factor > 0.0 && self.refine_factor < 1.0) {
            return bad("refine_factor must lie in (0, 1)");
        }
        if self.boundary_margin_cells == 0 {
            return bad("boundary_margin_cells must be positive");
        }
        if self.neighbor_stencil != 8 && self.neighbor_stencil != 16 {
            return bad("neighbor_stencil must be 8 or 16");
        }
        if !(self.convergence_rel_tol >= 1e-6) {
            return bad("convergence_rel_tol must be at least 1e-6");
        }
        if self.max_nodes < 100 {
            return bad("max_nodes must be at least 100");
        }
        Ok(())
    }

    /// The same parameters with the grid spacing scaled by `refine_factor`.
    pub fn refined(&self) -> SolverParams {
        SolverParams {
            initial_spacing: self.initial_spacing * self.refine_factor,
            max_nodes: (self.max_nodes as f64 / (self.refine_factor * self.refine_factor)) as usize,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Grid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicResult {
    pub path: PathPolyline,
    pub length: LengthInterval,
    pub method: Method,
    pub grid_spacing: Option<f64>,
    pub chordarc_lambda: Option<f64>,
}

/// A scalar conformal density on a domain; infinite off the domain.
#[derive(Clone, Copy)]
pub struct Density<'a> {
    pub dom: &'a Domain,
    pub metric: MetricKind,
    pub bound: Bound,
}

impl<'a> Density<'a> {
    pub fn new(dom: &'a Domain, metric: MetricKind, bound: Bound) -> Density<'a> {
        Density { dom, metric, bound }
    }

    pub fn eval(&self, z: Point) -> f64 {
        let v = match self.metric {
            MetricKind::Quasihyperbolic => qh_density(self.dom, z),
            MetricKind::Hyperbolic => hyp_density(self.dom, z).map(|d| match self.bound {
                Bound::Lower => d.lower,
                Bound::Upper => d.upper,
            }),
        };
        v.unwrap_or(f64::INFINITY)
    }

    /// Fixed 8-point Gauss–Legendre integral along a segment.
    pub fn segment(&self, p0: Point, p1: Point) -> f64 {
        const X: [f64; 4] = [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
        const W: [f64; 4] = [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];
        let mid = (p0 + p1) * 0.5;
        let half = (p1 - p0) * 0.5;
        let mut s = 0.0;
        for i in 0..4 {
            s += W[i] * (self.eval(mid + half * X[i]) + self.eval(mid - half * X[i]));
        }
        s * half.norm()
    }

    pub fn polyline(&self, v: &[Point]) -> f64 {
        v.windows(2).map(|w| self.segment(w[0], w[1])).sum()
    }

    /// Adaptive quadrature length of a polyline.
    pub fn length(&self, v: &[Point]) -> Result<f64> {
        crate::metrics::polyline_integral(v, QUAD_TOL, |z| {
            let d = self.eval(z);
            if d.is_finite() {
                Ok(d)
            } else {
                Err(Error::NotInDomain(z))
            }
        })
    }
}

#[derive(Copy, Clone, PartialEq)]
struct State(f64, usize);

impl Eq for State {}

impl Ord for State {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for State {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const STENCIL: [(i64, i64); 16] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
    (2, 1),
    (2, -1),
    (-2, 1),
    (-2, -1),
    (1, 2),
    (1, -2),
    (-1, 2),
    (-1, -2),
];

/// Uniform grid restricted to nodes at least `margin` cells from the boundary.
pub(crate) struct Grid {
    origin: Point,
    h: f64,
    nx: usize,
    ny: usize,
    valid: Vec<bool>,
    margin: u32,
}

impl Grid {
    fn build(dom: &Domain, lo: Point, hi: Point, h: f64, margin: u32) -> Grid {
        let nx = ((hi.re - lo.re) / h).ceil() as usize + 1;
        let ny = ((hi.im - lo.im) / h).ceil() as usize + 1;
        let mut valid = vec![false; nx * ny];
        let need = margin as f64 * h;
        for j in 0..ny {
            for i in 0..nx {
                let z = lo + pt(i as f64 * h, j as f64 * h);
                valid[j * nx + i] = dom.delta(z).map(|d| d >= need).unwrap_or(false);
            }
        }
        Grid { origin: lo, h, nx, ny, valid, margin }
    }

    fn pos(&self, idx: usize) -> Point {
        self.origin + pt((idx % self.nx) as f64 * self.h, (idx / self.nx) as f64 * self.h)
    }

    /// Valid nodes within `radius` of `z` joined to it by a segment inside the domain.
    fn connections(&self, dom: &Domain, dens: &Density, z: Point) -> Vec<(usize, f64)> {
        for mult in [2.5, 4.0, 6.0] {
            let radius = mult * self.h;
            let i0 = (((z.re - radius - self.origin.re) / self.h).floor().max(0.0)) as usize;
            let j0 = (((z.im - radius - self.origin.im) / self.h).floor().max(0.0)) as usize;
            let i1 = (((z.re + radius - self.origin.re) / self.h).ceil().max(0.0) as usize).min(self.nx - 1);
            let j1 = (((z.im + radius - self.origin.im) / self.h).ceil().max(0.0) as usize).min(self.ny - 1);
            let mut out = Vec::new();
            for j in j0..=j1 {
                for i in i0..=i1 {
                    let idx = j * self.nx + i;
                    if !self.valid[idx] {
                        continue;
                    }
                    let p = self.pos(idx);
                    if (p - z).norm() <= radius && dom.segment_clearance(z, p) > 0.0 {
                        let c = dens.segment(z, p);
                        if c.is_finite() {
                            out.push((idx, c));
                        }
                    }
                }
            }
            if !out.is_empty() {
                return out;
            }
        }
        Vec::new()
    }

    /// Multi-source Dijkstra; stops early once every target is settled past the best arrival.
    fn dijkstra(
        &self,
        dom: &Domain,
        dens: &Density,
        stencil: usize,
        sources: &[(usize, f64)],
        targets: Option<&[(usize, f64)]>,
    ) -> (Vec<f64>, Vec<usize>, Option<usize>) {
        let n = self.nx * self.ny;
        let mut dist = vec![f64::INFINITY; n];
        let mut pred = vec![usize::MAX; n];
        let mut heap = BinaryHeap::new();
        for &(s, c) in sources {
            if c < dist[s] {
                dist[s] = c;
                heap.push(State(c, s));
            }
        }
        let mut target_cost = vec![f64::INFINITY; if targets.is_some() { n } else { 0 }];
        if let Some(t) = targets {
            for &(i, c) in t {
                target_cost[i] = target_cost[i].min(c);
            }
        }
        let mut best = f64::INFINITY;
        let mut best_node = None;
        let check_edges = self.margin < 2;
        while let Some(State(d, u)) = heap.pop() {
            if d > dist[u] {
                continue;
            }
            if targets.is_some() {
                if d >= best {
                    break;
                }
                let t = target_cost[u];
                if d + t < best {
                    best = d + t;
                    best_node = Some(u);
                }
            }
            let (ui, uj) = ((u % self.nx) as i64, (u / self.nx) as i64);
            let pu = self.pos(u);
            for &(di, dj) in &STENCIL[..stencil] {
                let (vi, vj) = (ui + di, uj + dj);
                if vi < 0 || vj < 0 || vi >= self.nx as i64 || vj >= self.ny as i64 {
                    continue;
                }
                let v = vj as usize * self.nx + vi as usize;
                if !self.valid[v] {
                    continue;
                }
                let pv = self.pos(v);
                if check_edges && dom.segment_clearance(pu, pv) <= 0.0 {
                    continue;
                }
                let w = dens.eval((pu + pv) * 0.5) * (pv - pu).norm();
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    pred[v] = u;
                    heap.push(State(nd, v));
                }
            }
        }
        (dist, pred, best_node)
    }
}

fn bbox(points: &[Point], pad: f64) -> (Point, Point) {
    let mut lo = pt(f64::INFINITY, f64::INFINITY);
    let mut hi = pt(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo = pt(lo.re.min(p.re), lo.im.min(p.im));
        hi = pt(hi.re.max(p.re), hi.im.max(p.im));
    }
    (lo - pt(pad, pad), hi + pt(pad, pad))
}

fn spacing_for(lo: Point, hi: Point, h: f64, max_nodes: usize) -> f64 {
    let area = (hi.re - lo.re) * (hi.im - lo.im);
    h.max((area / max_nodes as f64).sqrt())
}

/// Whether replacing the vertex `p` by `q` (with neighbours `a`, `b`) sweeps over a winding center.
fn sweeps_center(a: Point, p: Point, q: Point, b: Point, centers: &[Point]) -> bool {
    centers.iter().any(|&c| triangle_contains(a, p, q, c) || triangle_contains(p, q, b, c))
}

/// Removes vertices whose two segments can be replaced by a shorter chord in the same homotopy class.
fn shortcut(dom: &Domain, dens: &Density, v: &mut Vec<Point>, centers: &[Point]) {
    loop {
        let mut changed = false;
        let mut i = 1;
        while i + 1 < v.len() {
            let (a, p, b) = (v[i - 1], v[i], v[i + 1]);
            let ok = dom.segment_clearance(a, b) > 0.0
                && !centers.iter().any(|&c| triangle_contains(a, p, b, c))
                && dens.segment(a, b) < dens.segment(a, p) + dens.segment(p, b);
            if ok {
                v.remove(i);
                changed = true;
            } else {
                i += 1;
            }
        }
        if !changed {
            break;
        }
    }
}

/// Resamples a polyline to `n` segments of equal metric length, keeping old vertices where a chord would
/// leave the domain or change the homotopy class.
fn resample(dom: &Domain, dens: &Density, v: &[Point], n: usize, centers: &[Point]) -> Vec<Point> {
    let seg: Vec<f64> = v.windows(2).map(|w| dens.segment(w[0], w[1])).collect();
    let total: f64 = seg.iter().sum();
    if !(total > 0.0) || !total.is_finite() || v.len() < 2 {
        return v.to_vec();
    }
    // (point, index of the segment it lies on)
    let mut pts: Vec<(Point, usize)> = vec![(v[0], 0)];
    let mut acc = 0.0;
    let mut i = 0;
    for j in 1..n {
        let t = total * j as f64 / n as f64;
        while i + 1 < seg.len() && acc + seg[i] < t {
            acc += seg[i];
            i += 1;
        }
        let f = if seg[i] > 0.0 { ((t - acc) / seg[i]).clamp(0.0, 1.0) } else { 0.0 };
        pts.push((v[i] + (v[i + 1] - v[i]) * f, i));
    }
    pts.push((v[v.len() - 1], v.len() - 2));
    let mut out = vec![pts[0].0];
    for k in 0..pts.len() - 1 {
        let (p, si) = pts[k];
        let (q, sj) = pts[k + 1];
        let between: Vec<Point> = ((si + 1)..=sj).map(|m| v[m]).filter(|&m| m != q && m != p).collect();
        let mut poly = vec![p];
        poly.extend(&between);
        poly.push(q);
        let safe = dom.segment_clearance(p, q) > 0.0 && centers.iter().all(|&c| winding_number(&poly, c) == 0);
        if !safe {
            out.extend(between);
        }
        out.push(q);
    }
    out.dedup();
    out
}

/// Gauss–Seidel sweeps moving each interior vertex along the normal of its neighbours' chord.
fn relax_level(dom: &Domain, dens: &Density, v: &mut [Point], centers: &[Point], max_sweeps: usize) {
    let n = v.len();
    if n < 3 {
        return;
    }
    for _ in 0..max_sweeps {
        let mut gain = 0.0;
        let mut total = 0.0;
        for i in 1..n - 1 {
            let (a, p, b) = (v[i - 1], v[i], v[i + 1]);
            let chord = b - a;
            let cl = chord.norm();
            let scale = (p - a).norm().min((b - p).norm());
            if cl == 0.0 || scale == 0.0 {
                continue;
            }
            let nrm = chord * pt(0.0, 1.0) / cl;
            let f = |q: Point| dens.segment(a, q) + dens.segment(q, b);
            let f0 = f(p);
            total += f0;
            let h = 1e-3 * scale;
            let fp = f(p + nrm * h);
            let fm = f(p - nrm * h);
            if !(fp.is_finite() && fm.is_finite() && f0.is_finite()) {
                continue;
            }
            let g = (fp - fm) / (2.0 * h);
            let curv = (fp - 2.0 * f0 + fm) / (h * h);
            let mut s = if curv > 0.0 { -g / curv } else { -g.signum() * 0.25 * scale };
            s = s.clamp(-0.5 * scale, 0.5 * scale);
            for _ in 0..5 {
                if s.abs() < 1e-13 * scale {
                    break;
                }
                let q = p + nrm * s;
                if dom.segment_clearance(a, q) > 0.0 && dom.segment_clearance(q, b) > 0.0 && !sweeps_center(a, p, q, b, centers) {
                    let fq = f(q);
                    if fq < f0 {
                        gain += f0 - fq;
                        v[i] = q;
                        break;
                    }
                }
                s *= 0.5;
            }
        }
        if gain <= 1e-8 * total {
            break;
        }
    }
}

/// Multilevel relaxation of an initial polyline towards a geodesic.
fn relax(dom: &Domain, dens: &Density, init: Vec<Point>, centers: &[Point]) -> Vec<Point> {
    let mut v = resample(dom, dens, &init, 16, centers);
    relax_level(dom, dens, &mut v, centers, 40);
    let mut prev = dens.polyline(&v);
    let mut n = 16;
    while n < 64 {
        n *= 2;
        let mut w = resample(dom, dens, &v, n, centers);
        relax_level(dom, dens, &mut w, centers, 20);
        let len = dens.polyline(&w);
        let done = (prev - len).abs() <= 1e-6 * len;
        if len <= prev {
            v = w;
            prev = len;
        }
        if done {
            break;
        }
    }
    v
}

/// Grid shortest path, shortcut and relaxed, for one scalar density and one spacing.
fn grid_solve(dom: &Domain, dens: &Density, a: Point, b: Point, h: f64, params: &SolverParams) -> Result<(Vec<Point>, f64, f64)> {
    let pad = 2.0 * dom.delta(a)?.max(dom.delta(b)?);
    let (lo, hi) = bbox(&[a, b], pad);
    let h = spacing_for(lo, hi, h, params.max_nodes);
    let grid = Grid::build(dom, lo, hi, h, params.boundary_margin_cells);
    let src = grid.connections(dom, dens, a);
    let dst = grid.connections(dom, dens, b);
    let centers = dom.winding_centers();
    let direct = (dom.segment_clearance(a, b) > 0.0 && (a - b).norm() <= 3.0 * h).then(|| dens.segment(a, b));
    let mut path = if src.is_empty() || dst.is_empty() {
        None
    } else {
        let (dist, pred, best) = grid.dijkstra(dom, dens, params.neighbor_stencil as usize, &src, Some(&dst));
        best.map(|t| {
            let arrive = dst.iter().filter(|x| x.0 == t).map(|x| x.1).fold(f64::INFINITY, f64::min);
            let mut nodes = vec![t];
            let mut u = t;
            while pred[u] != usize::MAX {
                u = pred[u];
                nodes.push(u);
            }
            nodes.reverse();
            let mut v = vec![a];
            v.extend(nodes.iter().map(|&i| grid.pos(i)));
            v.push(b);
            (v, dist[t] + arrive)
        })
    };
    if let Some(d) = direct {
        if path.as_ref().map_or(true, |p| d <= p.1) {
            path = Some((vec![a, b], d));
        }
    }
    let (mut v, _) = path.ok_or_else(|| Error::Resolution(format!("no grid path at spacing {h:.3e}")))?;
    v.dedup();
    shortcut(dom, dens, &mut v, &centers);
    let v = relax(dom, dens, v, &centers);
    let len = dens.length(&v)?;
    log::debug!("grid solve h={h:.3e} length={len:.9}");
    Ok((v, len, h))
}

/// Shortest path for one scalar density, refining the grid until successive lengths agree.
fn solve_scalar(dom: &Domain, dens: &Density, a: Point, b: Point, params: &SolverParams) -> Result<(Vec<Point>, f64, f64)> {
    let base = dom.delta(a)?.min(dom.delta(b)?);
    let mut h = params.initial_spacing * base;
    let mut prev: Option<f64> = None;
    let mut last: Option<(Vec<Point>, f64, f64)> = None;
    let mut p = *params;
    let mut err = None;
    for _ in 0..=params.max_refinements {
        match grid_solve(dom, dens, a, b, h, &p) {
            Ok((v, len, used)) => {
                let converged = prev.map_or(false, |q| (q - len).abs() <= params.convergence_rel_tol * len);
                prev = Some(len);
                let keep = last.as_ref().map_or(true, |l| len <= l.1);
                if keep {
                    last = Some((v, len, used));
                }
                if converged {
                    break;
                }
            }
            Err(e) => err = Some(e),
        }
        h *= params.refine_factor;
        p.max_nodes = (p.max_nodes as f64 / (params.refine_factor * params.refine_factor)) as usize;
    }
    last.ok_or_else(|| err.unwrap_or_else(|| Error::Resolution("no grid path found".into())))
}

/// Numerical geodesic between `a` and `b`.
pub fn solve_geodesic(dom: &Domain, metric: MetricKind, a: Point, b: Point, params: &SolverParams) -> Result<GeodesicResult> {
    params.validate()?;
    dom.delta(a)?;
    dom.delta(b)?;
    if metric == MetricKind::Hyperbolic {
        dom.require_hyperbolic()?;
    }
    if a == b {
        return Err(Error::Parameter("endpoints coincide".into()));
    }
    let exact_density = metric == MetricKind::Quasihyperbolic || crate::metrics::has_exact_hyp_density(dom);
    let lower = Density::new(dom, metric, Bound::Lower);
    let (v, len, h) = solve_scalar(dom, &lower, a, b, params)?;
    let length = if exact_density {
        DensityInterval::exact(len)
    } else {
        let upper = Density::new(dom, metric, Bound::Upper);
        let (_, up, _) = solve_scalar(dom, &upper, a, b, params)?;
        DensityInterval { lower: len, upper: up.max(len), exact: false }
    };
    Ok(GeodesicResult {
        path: PathPolyline::new(dom, v)?,
        length,
        method: Method::Grid,
        grid_spacing: Some(h),
        chordarc_lambda: None,
    })
}

/// Number of segments used when sampling closed-form geodesics.
pub const EXACT_SAMPLES: usize = 400;

/// `t ↦ o + (a-o) exp(t Log((b-o)/(a-o)))`, the quasihyperbolic geodesic of `C \ {o}`.
pub fn log_spiral(a: Point, b: Point, o: Point, n: usize) -> Vec<Point> {
    let l = principal_log((b - o) / (a - o));
    let mut v: Vec<Point> = (0..=n).map(|k| o + (a - o) * (l * (k as f64 / n as f64)).exp()).collect();
    v[0] = a;
    v[n] = b;
    v
}

/// Euclidean length of the log spiral from `a` to `b` about the origin.
pub fn spiral_euclidean_length(a: Point, b: Point) -> f64 {
    let l = principal_log(b / a);
    let (ra, rb) = (a.norm(), b.norm());
    let rho = (rb / ra).ln();
    let factor = if rho.abs() < 1e-8 { ra * (1.0 + 0.5 * rho) } else { (rb - ra) / rho };
    l.norm() * factor
}

/// Geodesic of the half-plane `{Im u > 0}` with density `1/Im u`, sampled uniformly in arclength.
fn uhp_geodesic(u1: Point, u2: Point, n: usize) -> Vec<Point> {
    let dx = u2.re - u1.re;
    if dx.abs() <= 1e-14 * (u1.norm() + u2.norm()) {
        let (s1, s2) = (u1.im.ln(), u2.im.ln());
        return (0..=n)
            .map(|k| {
                let s = s1 + (s2 - s1) * k as f64 / n as f64;
                pt(u1.re, s.exp())
            })
            .collect();
    }
    let c = (u2.norm_sqr() - u1.norm_sqr()) / (2.0 * dx);
    let r = (u1 - c).norm();
    let s1 = ((u1.re - c) / r).clamp(-1.0, 1.0).atanh();
    let s2 = ((u2.re - c) / r).clamp(-1.0, 1.0).atanh();
    (0..=n)
        .map(|k| {
            let s = s1 + (s2 - s1) * k as f64 / n as f64;
            pt(c + r * s.tanh(), r / s.cosh())
        })
        .collect()
}

fn fix_ends(mut v: Vec<Point>, a: Point, b: Point) -> Vec<Point> {
    let n = v.len() - 1;
    v[0] = a;
    v[n] = b;
    v
}

/// Hyperbolic geodesic of the punctured unit disk via the minimizing logarithmic lift.
fn dstar_geodesic(a: Point, b: Point, n: usize) -> Vec<Point> {
    let w1 = principal_log(a);
    let w2 = principal_log(b);
    let dist = |w: Point| {
        let t = (w1 - w).norm_sqr() / (2.0 * w1.re.abs() * w.re.abs());
        2.0 * (0.5 * t).sqrt().asinh()
    };
    let best = (-crate::metrics::DECK_SHIFTS..=crate::metrics::DECK_SHIFTS)
        .map(|k| w2 + pt(0.0, 2.0 * PI * k as f64))
        .min_by(|x, y| dist(*x).total_cmp(&dist(*y)))
        .unwrap();
    // w in the left half-plane; u = -i w lies in the upper half-plane
    let to_u = |w: Point| w * pt(0.0, -1.0);
    uhp_geodesic(to_u(w1), to_u(best), n).into_iter().map(|u| (u * pt(0.0, 1.0)).exp()).collect()
}

/// Closed-form geodesic when the domain and metric admit one.
pub fn exact_geodesic(dom: &Domain, metric: MetricKind, a: Point, b: Point) -> Result<Option<GeodesicResult>> {
    let d = match closed_form_distance(dom, metric, a, b)? {
        Some(d) => d,
        None => return Ok(None),
    };
    if a == b {
        return Ok(None);
    }
    let n = EXACT_SAMPLES;
    let verts = match (metric, dom.model().unwrap()) {
        (MetricKind::Quasihyperbolic, ModelTag::PuncturedPlane { o }) => log_spiral(a, b, o, n),
        (MetricKind::Quasihyperbolic, m @ (ModelTag::PuncturedUnitDisk | ModelTag::PuncturedDisk { .. })) => {
            log_spiral(a, b, m.punctured_disk_params().unwrap().0, n)
        }
        (_, ModelTag::HalfPlane { point, direction }) => {
            let fwd = |z: Point| (z - point) * direction.conj();
            let back = |u: Point| point + u * direction;
            uhp_geodesic(fwd(a), fwd(b), n).into_iter().map(back).collect()
        }
        (MetricKind::Hyperbolic, ModelTag::UnitDisk) => {
            let phi = (b - a) / (pt(1.0, 0.0) - a.conj() * b);
            let u = phi / phi.norm();
            (0..=n)
                .map(|k| {
                    let r = (0.5 * d * k as f64 / n as f64).tanh();
                    let w = u * r;
                    (w + a) / (pt(1.0, 0.0) + a.conj() * w)
                })
                .collect()
        }
        (MetricKind::Hyperbolic, m @ (ModelTag::PuncturedUnitDisk | ModelTag::PuncturedDisk { .. })) => {
            let (o, r) = m.punctured_disk_params().unwrap();
            dstar_geodesic((a - o) / r, (b - o) / r, n).into_iter().map(|w| o + w * r).collect()
        }
        (MetricKind::Hyperbolic, ModelTag::DiskComplement { o, r }) => {
            dstar_geodesic(r / (a - o), r / (b - o), n).into_iter().map(|w| o + r / w).collect()
        }
        _ => return Ok(None),
    };
    let path = PathPolyline::new(dom, fix_ends(verts, a, b))?;
    Ok(Some(GeodesicResult {
        path,
        length: DensityInterval::exact(d),
        method: Method::Exact,
        grid_spacing: None,
        chordarc_lambda: Some(1.0),
    }))
}

/// Exact geodesic if available, otherwise the grid solver.
pub fn geodesic(dom: &Domain, metric: MetricKind, a: Point, b: Point, params: &SolverParams) -> Result<GeodesicResult> {
    match exact_geodesic(dom, metric, a, b)? {
        Some(g) => Ok(g),
        None => solve_geodesic(dom, metric, a, b, params),
    }
}

/// Distance between two points: closed form when available, solver otherwise.
pub fn metric_distance(dom: &Domain, metric: MetricKind, a: Point, b: Point, params: &SolverParams) -> Result<LengthInterval> {
    if a == b {
        dom.delta(a)?;
        return Ok(DensityInterval::exact(0.0));
    }
    match closed_form_distance(dom, metric, a, b)? {
        Some(d) => Ok(DensityInterval::exact(d)),
        None => solve_geodesic(dom, metric, a, b, params).map(|g| g.length),
    }
}

/// The circular-arc-segment path: the shorter arc of `S¹(o; |a-o|)` from `a` to the radial
/// projection of `b`, followed by the radial segment to `b`.
pub fn chi_path(a: Point, b: Point, center: Point) -> Result<PathPolyline> {
    let (ra, rb) = ((a - center).norm(), (b - center).norm());
    if !(ra > 0.0) || !(rb > 0.0) || ra > rb * (1.0 + 1e-15) {
        return Err(Error::Parameter(format!("chi path needs 0 < |a-o| <= |b-o| (got {ra}, {rb})")));
    }
    let theta = crate::geom::arg((b - center) / (a - center));
    let steps = ((theta.abs() / (PI / 180.0)).ceil() as usize).max(1);
    let mut v: Vec<Point> = (0..=steps)
        .map(|k| center + (a - center) * pt(0.0, theta * k as f64 / steps as f64).exp())
        .collect();
    v[0] = a;
    v.push(b);
    Ok(PathPolyline::from_trusted(v))
}

/// Exact Euclidean length of the circular-arc-segment path.
pub fn chi_length(a: Point, b: Point, center: Point) -> f64 {
    let (ra, rb) = ((a - center).norm(), (b - center).norm());
    ra * crate::geom::arg((b - center) / (a - center)).abs() + (rb - ra)
}

/// Connector from `a` to `b`, arcs always taken on the smaller of the two circles about `o`.
fn chi_connector(a: Point, b: Point, o: Point) -> Result<Vec<Point>> {
    if (a - o).norm() <= (b - o).norm() {
        Ok(chi_path(a, b, o)?.into_vertices())
    } else {
        let mut v = chi_path(b, a, o)?.into_vertices();
        v.reverse();
        Ok(v)
    }
}

/// Bound on the chordarc constant after surgery: `3Λ + (2π/md)(Λ+1) + 2`.
pub fn surgery_bound(lambda: f64, modulus: f64) -> f64 {
    3.0 * lambda + 2.0 * PI / modulus * (lambda + 1.0) + 2.0
}

/// Prunes `alpha` at its first point `a` in the closed annulus and reroutes it to `b` on the
/// opposite boundary circle with a circular-arc-segment connector.
pub fn prune_chordarc(dom: &Domain, alpha: &PathPolyline, ann: &Annulus, b: Point) -> Result<PathPolyline> {
    if !ann.is_proper() {
        return Err(Error::Hypothesis("surgery needs a proper annulus".into()));
    }
    if ann.closure_contains(alpha.start()) {
        return Err(Error::Hypothesis("the path must start outside the closed annulus".into()));
    }
    let v = alpha.vertices();
    let mut hit = None;
    for (i, w) in v.windows(2).enumerate() {
        if let Some(s) = ann.first_closure_param(w[0], w[1]) {
            hit = Some(i as f64 + s);
            break;
        }
    }
    let s = hit.ok_or_else(|| Error::Hypothesis("the path never meets the annulus".into()))?;
    let a = alpha.at(s);
    let o = ann.center();
    let (ra, rb) = ((a - o).norm(), (b - o).norm());
    let (r, big_r) = (ann.inner_radius(), ann.outer_radius());
    let on = |x: f64, y: f64| (x - y).abs() <= 1e-9 * y;
    let opposite = (on(ra, r) && on(rb, big_r)) || (on(ra, big_r) && on(rb, r));
    if !opposite {
        return Err(Error::Hypothesis("b must lie on the boundary circle opposite to the entry point".into()));
    }
    let mut out = alpha.sub_vertices(0.0, s);
    let conn = chi_connector(a, b, o)?;
    out.extend(conn.into_iter().skip(1));
    out.dedup();
    PathPolyline::new(dom, out)
}

/// Largest sampled ratio `ℓ(path[x,y]) / d(x,y)` over vertex pairs (always including the endpoints).
pub fn chordarc_constant(
    dom: &Domain,
    metric: MetricKind,
    path: &PathPolyline,
    sample_pairs: usize,
    seed: u64,
    params: &SolverParams,
) -> Result<f64> {
    let v = path.vertices();
    let n = v.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = vec![(0usize, n - 1)];
    for _ in 0..sample_pairs {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i != j {
            pairs.push((i.min(j), i.max(j)));
        }
    }
    let mut worst: f64 = 1.0;
    for (i, j) in pairs {
        if v[i] == v[j] {
            continue;
        }
        let len = path_length_tol(dom, &v[i..=j], metric, QUAD_TOL)?;
        let d = metric_distance(dom, metric, v[i], v[j], params)?;
        if d.lower > 0.0 {
            worst = worst.max(len.upper / d.lower);
        }
    }
    Ok(worst)
}

/// Multi-source metric distance field on a grid.
pub struct DistanceField<'a> {
    dens: Density<'a>,
    grid: Grid,
    dist: Vec<f64>,
}

impl<'a> DistanceField<'a> {
    /// Distances from the union of `sources`, on a grid covering `cover` padded by `pad`.
    pub fn new(dens: Density<'a>, sources: &[Point], cover: &[Point], pad: f64, h: f64, params: &SolverParams) -> Result<DistanceField<'a>> {
        let dom = dens.dom;
        let mut all = sources.to_vec();
        all.extend_from_slice(cover);
        let (lo, hi) = bbox(&all, pad);
        let h = spacing_for(lo, hi, h, params.max_nodes);
        let grid = Grid::build(dom, lo, hi, h, params.boundary_margin_cells);
        let mut src: Vec<(usize, f64)> = Vec::new();
        for &s in sources {
            src.extend(grid.connections(dom, &dens, s));
        }
        if src.is_empty() {
            return Err(Error::Resolution("distance field has no source nodes".into()));
        }
        let (dist, _, _) = grid.dijkstra(dom, &dens, params.neighbor_stencil as usize, &src, None);
        Ok(DistanceField { dens, grid, dist })
    }

    pub fn spacing(&self) -> f64 {
        self.grid.h
    }

    /// Distance from `z` to the sources through the nearest connected grid nodes.
    pub fn at(&self, z: Point) -> f64 {
        self.grid
            .connections(self.dens.dom, &self.dens, z)
            .into_iter()
            .map(|(i, c)| self.dist[i] + c)
            .fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::path_length;
    use approx::assert_relative_eq;

    #[test]
    fn spiral_examples() {
        let c = Domain::punctured_plane(pt(0.0, 0.0));
        let g = exact_geodesic(&c, MetricKind::Quasihyperbolic, pt(1.0, 0.0), pt(0.0, 1.0)).unwrap().unwrap();
        assert_relative_eq!(g.length.lower, PI / 2.0, epsilon = 1e-12);
        let g = exact_geodesic(&c, MetricKind::Quasihyperbolic, pt(1.0, 0.0), pt(1f64.exp(), 0.0)).unwrap().unwrap();
        assert_relative_eq!(g.length.lower, 1.0, epsilon = 1e-12);
        let b = pt(1.0, PI).exp();
        let ell = spiral_euclidean_length(pt(1.0, 0.0), b);
        assert_relative_eq!(ell, (1.0 + PI * PI).sqrt() * (1f64.exp() - 1.0), epsilon = 1e-12);
        assert_relative_eq!((b - 1.0).norm(), 1f64.exp() + 1.0, epsilon = 1e-12);
        assert_relative_eq!(ell / (b - 1.0).norm(), 1.52356, epsilon = 1e-5);
    }

    #[test]
    fn chi_examples() {
        let p = chi_path(pt(1.0, 0.0), pt(0.0, 2.0), pt(0.0, 0.0)).unwrap();
        assert_relative_eq!(p.euclidean_length(), PI / 2.0 + 1.0, epsilon = 1e-4);
        assert_relative_eq!(chi_length(pt(1.0, 0.0), pt(0.0, 2.0), pt(0.0, 0.0)), PI / 2.0 + 1.0, epsilon = 1e-14);
        let p = chi_path(pt(1.0, 0.0), pt(2.0, 0.0), pt(0.0, 0.0)).unwrap();
        assert_relative_eq!(p.euclidean_length(), 1.0, epsilon = 1e-14);
        assert!(chi_path(pt(2.0, 0.0), pt(1.0, 0.0), pt(0.0, 0.0)).is_err());
    }

    #[test]
    fn exact_paths_have_their_length() {
        let d = Domain::punctured_unit_disk();
        let g = exact_geodesic(&d, MetricKind::Hyperbolic, pt(0.1, 0.0), pt(-0.3, 0.2)).unwrap().unwrap();
        let l = path_length(&d, &g.path, MetricKind::Hyperbolic).unwrap();
        assert_relative_eq!(l.lower, g.length.lower, max_relative = 1e-5);
        let u = Domain::unit_disk();
        let g = exact_geodesic(&u, MetricKind::Hyperbolic, pt(0.5, 0.1), pt(-0.3, 0.6)).unwrap().unwrap();
        let l = path_length(&u, &g.path, MetricKind::Hyperbolic).unwrap();
        assert_relative_eq!(l.lower, g.length.lower, max_relative = 1e-5);
    }

    #[test]
    fn solver_radial_dstar() {
        let d = Domain::punctured_unit_disk();
        let g = solve_geodesic(&d, MetricKind::Quasihyperbolic, pt(0.1, 0.0), pt(0.4, 0.0), &SolverParams::default()).unwrap();
        assert_relative_eq!(g.length.lower, 4f64.ln(), max_relative = 1e-3);
        assert_eq!(g.method, Method::Grid);
    }

    #[test]
    fn solver_spiral() {
        let c = Domain::punctured_plane(pt(0.0, 0.0));
        let b = pt(1.0, PI / 2.0).exp();
        let g = solve_geodesic(&c, MetricKind::Quasihyperbolic, pt(1.0, 0.0), b, &SolverParams::default()).unwrap();
        assert_relative_eq!(g.length.lower, (1.0 + PI * PI / 4.0).sqrt(), max_relative = 1e-3);
    }

    #[test]
    fn solver_disk() {
        let u = Domain::unit_disk();
        let g = solve_geodesic(&u, MetricKind::Hyperbolic, pt(0.0, 0.0), pt(0.5, 0.0), &SolverParams::default()).unwrap();
        assert_relative_eq!(g.length.lower, 3f64.ln(), max_relative = 1e-3);
    }

    #[test]
    fn solver_general_hyperbolic_is_an_interval() {
        let c = Domain::twice_punctured_plane();
        let g = solve_geodesic(&c, MetricKind::Hyperbolic, pt(-1.0, 0.5), pt(2.0, 0.5), &SolverParams::default()).unwrap();
        assert!(!g.length.exact);
        assert!(g.length.lower < g.length.upper);
    }

    #[test]
    fn pruning_radial_segment() {
        let c = Domain::punctured_plane(pt(0.0, 0.0));
        let alpha = PathPolyline::new(&c, vec![pt(4.0, 0.0), pt(0.5, 0.0)]).unwrap();
        let ann = Annulus::from_radii(pt(0.0, 0.0), 1.0, 2.0).unwrap();
        let p = prune_chordarc(&c, &alpha, &ann, pt(0.0, 1.0)).unwrap();
        assert_eq!(p.start(), pt(4.0, 0.0));
        assert_relative_eq!((p.end() - pt(0.0, 1.0)).norm(), 0.0, epsilon = 1e-12);
        // segment [4,2], radial segment [2,1], quarter arc of radius 1
        assert_relative_eq!(p.euclidean_length(), 3.0 + PI / 2.0, max_relative = 1e-4);
        let m = chordarc_constant(&c, MetricKind::Quasihyperbolic, &p, 40, 1, &SolverParams::default()).unwrap();
        assert!(m <= surgery_bound(1.0, ann.modulus()));
        assert!(prune_chordarc(&c, &alpha, &ann, pt(0.0, 1.5)).is_err());
    }

    #[test]
    fn chordarc_of_a_geodesic_is_one() {
        let c = Domain::punctured_plane(pt(0.0, 0.0));
        let g = exact_geodesic(&c, MetricKind::Quasihyperbolic, pt(1.0, 0.0), pt(-2.0, 1.0)).unwrap().unwrap();
        let m = chordarc_constant(&c, MetricKind::Quasihyperbolic, &g.path, 30, 3, &SolverParams::default()).unwrap();
        assert_relative_eq!(m, 1.0, max_relative = 1e-4);
    }
}
