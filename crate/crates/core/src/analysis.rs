//! Structural algorithms and certification harnesses: the ABC check, the good/bad decomposition of
//! a path, length-comparison certificates, thinness and stability probes, and the property suite.

use crate::beta::{beta_at, beta_value, enlarged_annulus};
use crate::domains::Domain;
use crate::error::{Error, Result};
use crate::geodesics::{geodesic, metric_distance, Density, DistanceField, SolverParams};
use crate::geom::{pt, segment_point_distance, Annulus, Point};
use crate::metrics::{
    closed_form_distance, gehring_palka_lower, has_exact_hyp_density, hyp_density, inverted_qh_density, kappa,
    path_length_tol, polyline_integral, qh_density, bpt_interval, Bound, DensityInterval, LengthInterval, MetricKind,
    PathPolyline, QUAD_TOL,
};
use crate::report;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI};

pub const SCHEMA_VERSION: u32 = 1;

// ---------------------------------------------------------------------------------------------
// ABC property

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbcParams {
    pub mu: f64,
    pub nu: f64,
}

impl AbcParams {
    pub fn new(mu: f64, nu: f64) -> Result<AbcParams> {
        if !(nu > 0.0 && mu >= nu && mu.is_finite()) {
            return Err(Error::Parameter(format!("ABC parameters need mu >= nu > 0 (got {mu}, {nu})")));
        }
        Ok(AbcParams { mu, nu })
    }

    /// `(π, log 2)`.
    pub fn quasihyperbolic() -> AbcParams {
        AbcParams { mu: PI, nu: LN_2 }
    }

    /// `(3κ, 5/2)`.
    pub fn hyperbolic() -> AbcParams {
        AbcParams { mu: 3.0 * kappa(), nu: 2.5 }
    }

    /// `(πΛ + C/2, log 2)` for `(Λ, C)`-rough chordarc paths.
    pub fn chordarc(lambda: f64, c: f64) -> AbcParams {
        AbcParams { mu: PI * lambda + 0.5 * c, nu: LN_2 }
    }

    pub fn for_metric(metric: MetricKind) -> AbcParams {
        match metric {
            MetricKind::Quasihyperbolic => Self::quasihyperbolic(),
            MetricKind::Hyperbolic => Self::hyperbolic(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AbcViolation {
    #[serde(serialize_with = "report::point")]
    pub center: Point,
    pub d: f64,
    /// Global path parameters of the first and last points on `S¹(o; d)`.
    pub s_first: f64,
    pub s_last: f64,
    pub rho_min: f64,
    pub rho_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbcReport {
    pub pass: bool,
    pub params: AbcParams,
    pub circles_checked: usize,
    pub violation: Option<AbcViolation>,
}

/// Parameters in `[0, 1]` where the segment meets the circle `S¹(o; d)`.
fn circle_hits(p0: Point, p1: Point, o: Point, d: f64) -> [Option<f64>; 2] {
    let a0 = p0 - o;
    let v = p1 - p0;
    let qa = v.norm_sqr();
    let qb = (v.conj() * a0).re;
    let qc = a0.norm_sqr() - d * d;
    let disc = qb * qb - qa * qc;
    if qa == 0.0 || disc < 0.0 {
        return [None, None];
    }
    let sq = disc.sqrt();
    let f = |t: f64| (-1e-13..=1.0 + 1e-13).contains(&t).then(|| t.clamp(0.0, 1.0));
    [f((-qb - sq) / qa), f((-qb + sq) / qa)]
}

/// Exact range of `|path(s) - o|` for `s ∈ [s0, s1]`.
fn rho_range(v: &[Point], o: Point, s0: f64, s1: f64) -> (f64, f64) {
    let at = |s: f64| {
        let i = (s.floor() as usize).min(v.len() - 2);
        v[i] + (v[i + 1] - v[i]) * (s - i as f64)
    };
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    let mut s = s0;
    while s < s1 {
        let next = (s.floor() + 1.0).min(s1);
        let (q0, q1) = (at(s), at(next));
        lo = lo.min(segment_point_distance(q0, q1, o));
        hi = hi.max((q0 - o).norm()).max((q1 - o).norm());
        s = next;
    }
    (lo, hi)
}

/// Checks the `(μ, ν)`-ABC property of a path about each of the given complement points.
pub fn abc_check(dom: &Domain, path: &PathPolyline, params: AbcParams, centers: &[Point]) -> Result<AbcReport> {
    AbcParams::new(params.mu, params.nu)?;
    let v = path.vertices();
    let mut checked = 0;
    for &o in centers {
        if dom.contains(o) {
            return Err(Error::Parameter("ABC centers must lie in the complement".into()));
        }
        let radii: Vec<f64> = v.iter().map(|z| (z - o).norm()).collect();
        let (rmin, rmax) = rho_range(v, o, 0.0, (v.len() - 1) as f64);
        if !(rmin > 0.0) || rmax <= rmin * (1.0 + 1e-12) {
            continue;
        }
        let mut levels: Vec<f64> = radii.clone();
        let span = (rmax / rmin).ln();
        let steps = (span / 0.005).ceil() as usize;
        levels.extend((1..steps).map(|k| rmin * (span * k as f64 / steps as f64).exp()));
        levels.sort_by(|a, b| a.total_cmp(b));
        levels.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * *b);
        for d in levels {
            let ann = Annulus::new(o, d, params.nu)?;
            let mut first = f64::INFINITY;
            let mut last = f64::NEG_INFINITY;
            for (i, w) in v.windows(2).enumerate() {
                for t in circle_hits(w[0], w[1], o, d).into_iter().flatten() {
                    first = first.min(i as f64 + t);
                    last = last.max(i as f64 + t);
                }
            }
            if !(last > first + 1e-12) {
                continue;
            }
            if !dom.annulus_in_domain(&ann).inside {
                continue;
            }
            checked += 1;
            let (lo, hi) = rho_range(v, o, first, last);
            let (e_lo, e_hi) = (d * (-params.mu).exp(), d * params.mu.exp());
            if lo < e_lo * (1.0 - 1e-9) || hi > e_hi * (1.0 + 1e-9) {
                return Ok(AbcReport {
                    pass: false,
                    params,
                    circles_checked: checked,
                    violation: Some(AbcViolation { center: o, d, s_first: first, s_last: last, rho_min: lo, rho_max: hi }),
                });
            }
        }
    }
    Ok(AbcReport { pass: true, params, circles_checked: checked, violation: None })
}

// ---------------------------------------------------------------------------------------------
// Good/bad decomposition

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecompositionConfig {
    pub lambda: f64,
    pub mu: f64,
    pub s: f64,
    pub m: f64,
    pub l: f64,
    pub xl: f64,
    /// Quasihyperbolic step used when sampling β along a path.
    #[serde(default = "default_sample_step")]
    pub sample_step: f64,
}

fn default_sample_step() -> f64 {
    0.01
}

impl DecompositionConfig {
    /// `S = 10μ, M = 10S, L = 10M, XL = 10L` with `μ = πΛ`.
    pub fn with_lambda(lambda: f64) -> DecompositionConfig {
        let mu = PI * lambda;
        DecompositionConfig { lambda, mu, s: 10.0 * mu, m: 100.0 * mu, l: 1000.0 * mu, xl: 10000.0 * mu, sample_step: 0.01 }
    }

    /// Thresholds with ratio 10 rescaled so that `L = 2`, reachable inside binary64 at desk scale.
    pub fn desk() -> DecompositionConfig {
        DecompositionConfig { lambda: 1.0, mu: PI, s: 0.02, m: 0.2, l: 2.0, xl: 20.0, sample_step: 0.01 }
    }

    pub fn scaled(s: f64, m: f64, l: f64, xl: f64) -> Result<DecompositionConfig> {
        let c = DecompositionConfig { s, m, l, xl, ..Self::desk() };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda >= 1.0) || !(self.mu > 0.0) {
            return Err(Error::Parameter("decomposition needs lambda >= 1 and mu > 0".into()));
        }
        if !(0.0 < self.s && self.s < self.m && self.m < self.l && self.l < self.xl) {
            return Err(Error::Parameter("decomposition thresholds must satisfy 0 < S < M < L < XL".into()));
        }
        if !(self.sample_step > 0.0) {
            return Err(Error::Parameter("sample_step must be positive".into()));
        }
        Ok(())
    }
}

impl Default for DecompositionConfig {
    fn default() -> Self {
        Self::with_lambda(1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Marker {
    pub label: String,
    /// Global vertex parameter along the path.
    pub param: f64,
    #[serde(serialize_with = "report::point")]
    pub point: Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubarcKind {
    Good,
    Bad,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Subarc {
    pub kind: SubarcKind,
    pub start: f64,
    pub end: f64,
    pub length_k: f64,
    pub length_h: LengthInterval,
    pub max_beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub samples: usize,
    #[serde(serialize_with = "report::real")]
    pub worst_margin: f64,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, pass: bool, samples: usize, worst_margin: f64, detail: impl Into<String>) -> CheckResult {
        CheckResult { name: name.into(), pass, samples, worst_margin, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub config: DecompositionConfig,
    pub n: usize,
    pub markers_h: Vec<Marker>,
    pub markers_k: Vec<Marker>,
    #[serde(serialize_with = "report::annuli")]
    pub annuli: Vec<Annulus>,
    pub subarcs_h: Vec<Subarc>,
    pub subarcs_k: Vec<Subarc>,
    pub degenerate_annulus: bool,
    pub checks: Vec<CheckResult>,
}

impl DecompositionReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// The five structural invariants together with properness of every `A_i`.
    pub fn structural_pass(&self) -> bool {
        STRUCTURAL_CHECKS.iter().all(|n| self.check(n).map_or(false, |c| c.pass))
    }
}

pub const STRUCTURAL_CHECKS: [&str; 6] =
    ["beta_at_markers", "good_subarcs_beta_le_l", "cores_separate", "cores_disjoint", "marker_order", "annuli_proper"];

/// Parameters from `s0` to `s1` spaced by roughly `step` in the quasihyperbolic metric; vertices included.
fn march(dom: &Domain, path: &PathPolyline, s0: f64, s1: f64, step: f64) -> Result<Vec<f64>> {
    let v = path.vertices();
    let mut out = vec![s0];
    let mut s = s0;
    while s < s1 {
        let d = dom.delta(path.at(s))?;
        let i = (s.floor() as usize).min(v.len() - 2);
        let len = (v[i + 1] - v[i]).norm();
        let next_vertex = (i + 1) as f64;
        let mut t = s + step * d / len;
        if t >= next_vertex {
            t = next_vertex;
        }
        s = t.min(s1);
        out.push(s);
    }
    Ok(out)
}

/// First parameter in `[s0, end]` where β reaches `level`, by sampling and bisection.
fn first_beta_crossing(dom: &Domain, path: &PathPolyline, s0: f64, level: f64, step: f64) -> Result<Option<(f64, f64)>> {
    let end = (path.vertices().len() - 1) as f64;
    let params = march(dom, path, s0, end, step)?;
    let b0 = beta_value(dom, path.at(params[0]))?;
    if b0 >= level {
        return Ok(Some((params[0], b0)));
    }
    for w in params.windows(2) {
        let b = beta_value(dom, path.at(w[1]))?;
        if b >= level {
            let (mut lo, mut hi) = (w[0], w[1]);
            let mut bhi = b;
            while hi - lo > 1e-10 * hi.max(1.0) {
                let mid = 0.5 * (lo + hi);
                let bm = beta_value(dom, path.at(mid))?;
                if bm >= level {
                    hi = mid;
                    bhi = bm;
                } else {
                    lo = mid;
                }
            }
            if (bhi - level).abs() > 1e-6 * level.max(1.0) {
                return Err(Error::Resolution(format!(
                    "beta jumps across {level} near parameter {hi} (value {bhi}); refine sample_step"
                )));
            }
            return Ok(Some((hi, bhi)));
        }
    }
    Ok(None)
}

fn first_in_closure(ann: &Annulus, v: &[Point]) -> Option<f64> {
    v.windows(2).enumerate().find_map(|(i, w)| ann.first_closure_param(w[0], w[1]).map(|s| i as f64 + s))
}

fn last_in_closure(ann: &Annulus, v: &[Point]) -> Option<f64> {
    v.windows(2).enumerate().rev().find_map(|(i, w)| ann.last_closure_param(w[0], w[1]).map(|s| i as f64 + s))
}

fn subarc(dom: &Domain, path: &PathPolyline, kind: SubarcKind, s0: f64, s1: f64, step: f64) -> Result<Subarc> {
    let verts = path.sub_vertices(s0, s1);
    let (length_k, length_h) = if verts.len() >= 2 && verts[0] != verts[verts.len() - 1] {
        (
            path_length_tol(dom, &verts, MetricKind::Quasihyperbolic, QUAD_TOL)?.lower,
            path_length_tol(dom, &verts, MetricKind::Hyperbolic, QUAD_TOL)?,
        )
    } else {
        (0.0, DensityInterval::exact(0.0))
    };
    let mut max_beta: f64 = 0.0;
    for s in march(dom, path, s0, s1, step)? {
        max_beta = max_beta.max(beta_value(dom, path.at(s))?);
    }
    Ok(Subarc { kind, start: s0, end: s1, length_k, length_h, max_beta })
}

/// Splits `gamma_h` (and `gamma_k`) into good subarcs, where β stays below `L`, and bad subarcs
/// crossing the cores of the enlarged annuli `A_i = 𝒜(z_i)`.
pub fn decompose_good_bad(
    dom: &Domain,
    gamma_h: &PathPolyline,
    gamma_k: &PathPolyline,
    cfg: &DecompositionConfig,
) -> Result<DecompositionReport> {
    cfg.validate()?;
    dom.require_hyperbolic()?;
    let (a, b) = (gamma_h.start(), gamma_h.end());
    let close = |p: Point, q: Point| (p - q).norm() <= 1e-12 * (1.0 + p.norm());
    if !close(gamma_k.start(), a) || !close(gamma_k.end(), b) {
        return Err(Error::Hypothesis("both paths must share their endpoints".into()));
    }
    for z in [a, b] {
        let bz = beta_value(dom, z)?;
        if bz > cfg.s {
            return Err(Error::Hypothesis(format!("beta at endpoint {z} is {bz}, above S = {}", cfg.s)));
        }
    }
    let end_h = (gamma_h.vertices().len() - 1) as f64;
    let end_k = (gamma_k.vertices().len() - 1) as f64;
    let mk = |label: String, path: &PathPolyline, s: f64| Marker { label, param: s, point: path.at(s) };
    let mut markers_h = vec![mk("a0".into(), gamma_h, 0.0)];
    let mut markers_k = vec![mk("a0".into(), gamma_k, 0.0)];
    let mut annuli = Vec::new();
    let mut z_betas = Vec::new();
    let mut good_h = Vec::new();
    let mut bad_h = Vec::new();
    let mut good_k = Vec::new();
    let mut bad_k = Vec::new();
    let mut degenerate = false;
    let (mut cur_h, mut cur_k) = (0.0, 0.0);
    let mut i = 0;
    while let Some((z_param, z_beta)) = first_beta_crossing(dom, gamma_h, cur_h, cfg.l, cfg.sample_step)? {
        i += 1;
        if i > 256 {
            return Err(Error::Resolution("decomposition did not terminate".into()));
        }
        let z = gamma_h.at(z_param);
        let ann = enlarged_annulus(dom, z)?;
        annuli.push(ann);
        z_betas.push(z_beta);
        let core = if ann.is_proper() { ann.core(2.0 * cfg.m).ok() } else { None };
        let core = match core {
            Some(c) => c,
            None => {
                degenerate = true;
                markers_h.push(mk(format!("z{i}"), gamma_h, z_param));
                break;
            }
        };
        let bh = first_in_closure(&core, gamma_h.vertices()).unwrap_or(z_param);
        let ah = last_in_closure(&core, gamma_h.vertices()).unwrap_or(z_param);
        let bk = first_in_closure(&core, gamma_k.vertices());
        let ak = last_in_closure(&core, gamma_k.vertices());
        markers_h.push(mk(format!("b{}", i - 1), gamma_h, bh));
        markers_h.push(mk(format!("z{i}"), gamma_h, z_param));
        markers_h.push(mk(format!("a{i}"), gamma_h, ah));
        good_h.push((cur_h, bh));
        bad_h.push((bh, ah));
        if let (Some(bk), Some(ak)) = (bk, ak) {
            markers_k.push(mk(format!("b{}", i - 1), gamma_k, bk));
            markers_k.push(mk(format!("a{i}"), gamma_k, ak));
            good_k.push((cur_k, bk));
            bad_k.push((bk, ak));
            cur_k = ak;
        }
        if ah <= cur_h {
            return Err(Error::Resolution("decomposition made no progress along the path".into()));
        }
        cur_h = ah;
    }
    if !degenerate {
        good_h.push((cur_h, end_h));
        good_k.push((cur_k, end_k));
    }
    let n = i;
    markers_h.push(mk(format!("b{n}"), gamma_h, end_h));
    markers_k.push(mk(format!("b{n}"), gamma_k, end_k));

    let step = cfg.sample_step;
    let mut subarcs_h = Vec::new();
    for (k, &(s0, s1)) in good_h.iter().enumerate() {
        subarcs_h.push(subarc(dom, gamma_h, SubarcKind::Good, s0, s1, step)?);
        if let Some(&(t0, t1)) = bad_h.get(k) {
            subarcs_h.push(subarc(dom, gamma_h, SubarcKind::Bad, t0, t1, step)?);
        }
    }
    let mut subarcs_k = Vec::new();
    for (k, &(s0, s1)) in good_k.iter().enumerate() {
        subarcs_k.push(subarc(dom, gamma_k, SubarcKind::Good, s0, s1, step)?);
        if let Some(&(t0, t1)) = bad_k.get(k) {
            subarcs_k.push(subarc(dom, gamma_k, SubarcKind::Bad, t0, t1, step)?);
        }
    }

    let mut checks = Vec::new();
    let worst = z_betas.iter().map(|bz| (bz - cfg.l).abs()).fold(0.0, f64::max);
    checks.push(CheckResult::new("beta_at_markers", worst <= 1e-6 * cfg.l.max(1.0), z_betas.len(), -worst, "|beta(z_i) - L|"));
    let goods: Vec<&Subarc> = subarcs_h.iter().filter(|s| s.kind == SubarcKind::Good).collect();
    let gmax = goods.iter().map(|s| s.max_beta).fold(0.0, f64::max);
    checks.push(CheckResult::new(
        "good_subarcs_beta_le_l",
        gmax <= cfg.l * (1.0 + 1e-9),
        goods.len(),
        cfg.l - gmax,
        "L - max sampled beta on good subarcs",
    ));
    let mut sep_ok = true;
    let mut sep_n = 0;
    for ann in annuli.iter().filter(|a| a.is_proper()) {
        sep_n += 1;
        sep_ok &= ann.core(2.0 * cfg.s).map(|c| c.separates(a, b)).unwrap_or(false);
    }
    checks.push(CheckResult::new("cores_separate", sep_ok, sep_n, if sep_ok { 0.0 } else { -1.0 }, "core(A_i, 2S) separates a from b"));
    let mut dis_ok = true;
    let mut pairs = 0;
    for x in 0..annuli.len() {
        for y in x + 1..annuli.len() {
            pairs += 1;
            let cx = annuli[x].core(cfg.m);
            let cy = annuli[y].core(cfg.m);
            dis_ok &= matches!((cx, cy), (Ok(p), Ok(q)) if Annulus::disjoint(&p, &q));
        }
    }
    checks.push(CheckResult::new("cores_disjoint", dis_ok, pairs, if dis_ok { 0.0 } else { -1.0 }, "core(A_i, M) pairwise disjoint"));
    let ordered = |m: &[Marker]| m.windows(2).all(|w| w[0].param <= w[1].param);
    let ord = ordered(&markers_h) && ordered(&markers_k);
    checks.push(CheckResult::new("marker_order", ord, markers_h.len() + markers_k.len(), 0.0, "markers increase along both paths"));
    let proper = annuli.iter().all(|a| a.is_proper());
    checks.push(CheckResult::new(
        "annuli_proper",
        !degenerate && proper,
        annuli.len(),
        if degenerate { -1.0 } else { 0.0 },
        if degenerate { "degenerate enlarged annulus" } else { "all A_i proper" },
    ));
    let mut cmp_ok = true;
    let mut cmp_n = 0;
    let mut cmp_margin = f64::INFINITY;
    for s in subarcs_h.iter().chain(&subarcs_k).filter(|s| s.kind == SubarcKind::Good && s.max_beta <= 2.0 * cfg.l) {
        if s.length_k == 0.0 {
            continue;
        }
        cmp_n += 1;
        let lo_ratio = s.length_k / s.length_h.upper;
        let hi_ratio = s.length_k / s.length_h.lower;
        cmp_margin = cmp_margin.min(lo_ratio - 0.5).min(3.0 * cfg.l - hi_ratio);
        cmp_ok &= lo_ratio >= 0.5 * (1.0 - 1e-9) && hi_ratio <= 3.0 * cfg.l * (1.0 + 1e-9);
    }
    checks.push(CheckResult::new("good_subarc_comparability", cmp_ok, cmp_n, cmp_margin, "1/2 <= l_k / l_h <= 3L on good subarcs"));

    Ok(DecompositionReport {
        config: *cfg,
        n,
        markers_h,
        markers_k,
        annuli,
        subarcs_h,
        subarcs_k,
        degenerate_annulus: degenerate,
        checks,
    })
}

// ---------------------------------------------------------------------------------------------
// Length comparison certificates

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ceilings {
    /// Ceiling for `ℓ_k(h-geodesic) / k(a, b)` on general domains.
    #[serde(default, serialize_with = "report::opt_real")]
    pub k_ceiling: Option<f64>,
    /// Ceiling for `ℓ_h(k-geodesic) / h(a, b)` on general domains.
    #[serde(default, serialize_with = "report::opt_real")]
    pub h_ceiling: Option<f64>,
    /// Relative slack for solver error.
    #[serde(default = "default_slack")]
    pub slack: f64,
}

fn default_slack() -> f64 {
    0.02
}

impl Default for Ceilings {
    fn default() -> Self {
        Ceilings { k_ceiling: None, h_ceiling: None, slack: 0.02 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LengthComparison {
    pub k_distance: LengthInterval,
    pub h_distance: LengthInterval,
    /// `ℓ_k` of the hyperbolic geodesic.
    pub lk_h_geodesic: LengthInterval,
    /// `ℓ_h` of the quasihyperbolic geodesic.
    pub lh_k_geodesic: LengthInterval,
    /// Bounds on `ℓ_k(h-geodesic) / k(a,b)`.
    pub ratio_k: [f64; 2],
    /// Bounds on `ℓ_h(k-geodesic) / h(a,b)`.
    pub ratio_h: [f64; 2],
    #[serde(serialize_with = "report::opt_real")]
    pub k_bound: Option<f64>,
    #[serde(serialize_with = "report::opt_real")]
    pub h_bound: Option<f64>,
    pub pass: bool,
}

fn ratio_bounds(num: LengthInterval, den: LengthInterval) -> [f64; 2] {
    [num.lower / den.upper, num.upper / den.lower]
}

/// Ceilings known in closed form: 11 for `ℓ_k` of hyperbolic geodesics in a punctured disk,
/// 2 for both ratios on simply connected domains.
fn known_ceilings(dom: &Domain) -> (Option<f64>, Option<f64>) {
    use crate::domains::ModelTag;
    match dom.model() {
        Some(ModelTag::PuncturedUnitDisk | ModelTag::PuncturedDisk { .. }) => (Some(11.0), None),
        Some(ModelTag::UnitDisk | ModelTag::HalfPlane { .. }) => (Some(2.0), Some(2.0)),
        _ => (None, None),
    }
}

/// Compares each metric's length of the other metric's geodesic against the distance.
pub fn certify_length_comparison(
    dom: &Domain,
    a: Point,
    b: Point,
    params: &SolverParams,
    ceilings: &Ceilings,
) -> Result<LengthComparison> {
    dom.require_hyperbolic()?;
    let (kk, kh) = known_ceilings(dom);
    let k_bound = kk.or(ceilings.k_ceiling);
    let h_bound = kh.or(ceilings.h_ceiling);
    if a == b {
        dom.delta(a)?;
        let zero = DensityInterval::exact(0.0);
        return Ok(LengthComparison {
            k_distance: zero,
            h_distance: zero,
            lk_h_geodesic: zero,
            lh_k_geodesic: zero,
            ratio_k: [1.0, 1.0],
            ratio_h: [1.0, 1.0],
            k_bound,
            h_bound,
            pass: true,
        });
    }
    let gh = geodesic(dom, MetricKind::Hyperbolic, a, b, params)?;
    let gk = geodesic(dom, MetricKind::Quasihyperbolic, a, b, params)?;
    let k_distance = gk.length;
    let h_distance = gh.length;
    let lk_h_geodesic = path_length_tol(dom, gh.path.vertices(), MetricKind::Quasihyperbolic, QUAD_TOL)?;
    let lh_k_geodesic = path_length_tol(dom, gk.path.vertices(), MetricKind::Hyperbolic, QUAD_TOL)?;
    let ratio_k = ratio_bounds(lk_h_geodesic, k_distance);
    let ratio_h = ratio_bounds(lh_k_geodesic, h_distance);
    let ok = |r: [f64; 2], bound: Option<f64>| bound.map_or(true, |c| r[0] <= c * (1.0 + ceilings.slack));
    let pass = ok(ratio_k, k_bound) && ok(ratio_h, h_bound);
    Ok(LengthComparison { k_distance, h_distance, lk_h_geodesic, lh_k_geodesic, ratio_k, ratio_h, k_bound, h_bound, pass })
}

/// `Q = 35 e^Λ`.
pub fn bad_arc_q(lambda: f64) -> f64 {
    35.0 * lambda.exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BadArcReport {
    pub q: f64,
    pub sigma_modulus: f64,
    pub trials: usize,
    /// Range of `k(a,b)` over sampled endpoints on opposite circles of `Σ`.
    pub k_distance: [f64; 2],
    pub sandwich: [f64; 2],
    pub sandwich_pass: bool,
    pub kk_ratio: [f64; 2],
    pub kk_bounds: [f64; 2],
    pub kk_pass: bool,
    pub hh_ratio: [f64; 2],
    /// `ℓ_k(h-geodesic) / ℓ_k(k-geodesic)`; reported without a ceiling.
    pub hk_ratio: [f64; 2],
    pub pass: bool,
}

/// Relative solver tolerance allowed on the endpoint-distance sandwich.
pub const SANDWICH_TOL: f64 = 0.01;

/// Samples geodesics joining the boundary circles of `Σ ⋐ core_Q(A)` and compares their lengths.
/// `slack` widens the k/k ratio window.
#[allow(clippy::too_many_arguments)]
pub fn certify_bad_arc_ratios(
    dom: &Domain,
    a_ann: &Annulus,
    q: f64,
    sigma: &Annulus,
    lambda: f64,
    trials: usize,
    seed: u64,
    params: &SolverParams,
    slack: f64,
) -> Result<BadArcReport> {
    dom.require_hyperbolic()?;
    if !(lambda >= 1.0) {
        return Err(Error::Parameter("lambda must be at least 1".into()));
    }
    if trials == 0 {
        return Err(Error::Parameter("at least one trial is required".into()));
    }
    if q < bad_arc_q(lambda) * (1.0 - 1e-12) {
        return Err(Error::Hypothesis(format!("Q = {q} is below 35 e^lambda = {}", bad_arc_q(lambda))));
    }
    if !a_ann.is_proper() || a_ann.half_modulus() < q {
        return Err(Error::Hypothesis("A must be proper with half modulus at least Q".into()));
    }
    let mem = dom.annulus_in_domain(a_ann);
    if !mem.inside || !mem.touches_both() {
        return Err(Error::Hypothesis("A must lie in the domain with both circles meeting the boundary".into()));
    }
    let core = a_ann.core(q)?;
    if !sigma.is_proper() || !Annulus::is_concentric_subannulus(sigma, &core) {
        return Err(Error::Hypothesis("Sigma must be a concentric subannulus of core_Q(A)".into()));
    }
    let m = sigma.modulus();
    if m < 1.0 {
        return Err(Error::Hypothesis("Sigma must have modulus at least 1".into()));
    }
    let o = sigma.center();
    let (r, big_r) = (sigma.inner_radius(), sigma.outer_radius());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut endpoints = Vec::with_capacity(trials);
    for _ in 0..trials {
        let t1: f64 = rng.gen_range(-PI..PI);
        let t2: f64 = rng.gen_range(-PI..PI);
        let t3: f64 = rng.gen_range(-PI..PI);
        let t4: f64 = rng.gen_range(-PI..PI);
        let at = |rad: f64, t: f64| o + pt(rad * t.cos(), rad * t.sin());
        endpoints.push([(at(r, t1), at(big_r, t2)), (at(r, t3), at(big_r, t4))]);
    }
    let measured: Vec<Result<[f64; 6]>> = endpoints
        .par_iter()
        .map(|pair| {
            let mut out = [0.0; 6];
            let mut lk = [0.0; 2];
            let mut lkh = [0.0; 2];
            let mut lh = [DensityInterval::exact(0.0); 2];
            for (j, &(x, y)) in pair.iter().enumerate() {
                let gk = geodesic(dom, MetricKind::Quasihyperbolic, x, y, params)?;
                let gh = geodesic(dom, MetricKind::Hyperbolic, x, y, params)?;
                lk[j] = gk.length.lower;
                lh[j] = gh.length;
                lkh[j] = path_length_tol(dom, gh.path.vertices(), MetricKind::Quasihyperbolic, QUAD_TOL)?.lower;
            }
            out[0] = lk[0].min(lk[1]);
            out[1] = lk[0].max(lk[1]);
            out[2] = lk[0] / lk[1];
            out[3] = lh[0].lower / lh[1].upper;
            out[4] = lh[0].upper / lh[1].lower;
            out[5] = lkh[0] / lk[1];
            Ok(out)
        })
        .collect();
    let mut kd = [f64::INFINITY, 0.0f64];
    let mut kk = [f64::INFINITY, 0.0f64];
    let mut hh = [f64::INFINITY, 0.0f64];
    let mut hk = [f64::INFINITY, 0.0f64];
    for r in measured {
        let v = r?;
        kd = [kd[0].min(v[0]), kd[1].max(v[1])];
        kk = [kk[0].min(v[2]), kk[1].max(v[2])];
        hh = [hh[0].min(v[3]), hh[1].max(v[4])];
        hk = [hk[0].min(v[5]), hk[1].max(v[5])];
    }
    let sandwich = [m, 2.0 * PI + 2.0 * m];
    let sandwich_pass = kd[0] >= sandwich[0] * (1.0 - SANDWICH_TOL) && kd[1] <= sandwich[1] * (1.0 + SANDWICH_TOL);
    let kk_bounds = [1.0 / (9.0 * lambda), 9.0 * lambda];
    let kk_pass = kk[0] >= kk_bounds[0] / (1.0 + slack) && kk[1] <= kk_bounds[1] * (1.0 + slack);
    Ok(BadArcReport {
        q,
        sigma_modulus: m,
        trials,
        k_distance: kd,
        sandwich,
        sandwich_pass,
        kk_ratio: kk,
        kk_bounds,
        kk_pass,
        hh_ratio: hh,
        hk_ratio: hk,
        pass: sandwich_pass && kk_pass,
    })
}

// ---------------------------------------------------------------------------------------------
// Thinness and stability

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThinnessReport {
    pub metric: MetricKind,
    pub triangles_sampled: usize,
    pub max_thinness: f64,
    /// The same estimate on a grid refined once.
    pub max_thinness_refined: f64,
    /// `|refined - base| / max(refined, base)`.
    pub refinement_change: f64,
    pub per_triangle: Vec<[f64; 2]>,
    #[serde(serialize_with = "report::opt_real")]
    pub stability_gap: Option<f64>,
}

/// Points sampled along an edge, by vertex index.
fn edge_samples(v: &[Point], count: usize) -> Vec<Point> {
    let n = v.len() - 1;
    (0..=count).map(|k| v[(k * n + count / 2) / count]).collect()
}

fn field_spacing(dom: &Domain, verts: &[Point], params: &SolverParams) -> Result<f64> {
    let mut dmin = f64::INFINITY;
    for &z in verts {
        dmin = dmin.min(dom.delta(z)?);
    }
    Ok(0.5 * params.initial_spacing * dmin)
}

fn triangle_thinness(
    dom: &Domain,
    metric: MetricKind,
    edges: &[Vec<Point>; 3],
    params: &SolverParams,
    spacing: f64,
) -> Result<f64> {
    let all: Vec<Point> = edges.iter().flatten().copied().collect();
    let mut pad: f64 = 0.0;
    for &z in &all {
        pad = pad.max(dom.delta(z)?);
    }
    let dens = Density::new(dom, metric, Bound::Lower);
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        let others: Vec<Point> = (0..3).filter(|&j| j != i).flat_map(|j| edges[j].iter().copied()).collect();
        let field = DistanceField::new(dens, &others, &all, 0.5 * pad, spacing, params)?;
        for z in edge_samples(&edges[i], 16) {
            if others.contains(&z) {
                continue;
            }
            let d = field.at(z);
            if !d.is_finite() {
                return Err(Error::Resolution(format!("distance field does not reach {z}")));
            }
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

/// Empirical thinness of geodesic triangles, at the given grid spacing and once refined.
pub fn thinness_estimate(
    dom: &Domain,
    metric: MetricKind,
    triples: &[[Point; 3]],
    params: &SolverParams,
) -> Result<ThinnessReport> {
    params.validate()?;
    let per: Vec<Result<[f64; 2]>> = triples
        .par_iter()
        .map(|t| {
            let mut edges: [Vec<Point>; 3] = Default::default();
            for i in 0..3 {
                let (x, y) = (t[i], t[(i + 1) % 3]);
                edges[i] = if x == y { vec![x] } else { geodesic(dom, metric, x, y, params)?.path.into_vertices() };
            }
            let h = field_spacing(dom, t, params)?;
            let fine = params.refined();
            let base = triangle_thinness(dom, metric, &edges, params, h)?;
            let refined = triangle_thinness(dom, metric, &edges, &fine, h * params.refine_factor)?;
            Ok([base, refined])
        })
        .collect();
    let mut per_triangle = Vec::new();
    for r in per {
        per_triangle.push(r?);
    }
    let max_thinness = per_triangle.iter().map(|p| p[0]).fold(0.0, f64::max);
    let max_thinness_refined = per_triangle.iter().map(|p| p[1]).fold(0.0, f64::max);
    let big = max_thinness.max(max_thinness_refined);
    let refinement_change = if big > 0.0 { (max_thinness - max_thinness_refined).abs() / big } else { 0.0 };
    Ok(ThinnessReport {
        metric,
        triangles_sampled: triples.len(),
        max_thinness,
        max_thinness_refined,
        refinement_change,
        per_triangle,
        stability_gap: None,
    })
}

/// Largest distance from a vertex of `quasi` to the vertex set of `geo`.
pub fn stability_gap(dom: &Domain, metric: MetricKind, quasi: &PathPolyline, geo: &[Point], params: &SolverParams) -> Result<f64> {
    if geo.is_empty() {
        return Err(Error::Parameter("reference geodesic has no vertices".into()));
    }
    let close = |p: Point, q: Point| (p - q).norm() <= 1e-9 * (1.0 + p.norm());
    if !close(quasi.start(), geo[0]) || !close(quasi.end(), geo[geo.len() - 1]) {
        return Err(Error::Hypothesis("paths must share their endpoints".into()));
    }
    let has_closed_form = closed_form_distance(dom, metric, geo[0], quasi.vertices()[quasi.vertices().len() / 2])?.is_some();
    let mut gap: f64 = 0.0;
    if has_closed_form {
        for &z in quasi.vertices() {
            let mut best = f64::INFINITY;
            for &g in geo {
                let d = if z == g { 0.0 } else { closed_form_distance(dom, metric, z, g)?.unwrap_or(f64::INFINITY) };
                best = best.min(d);
            }
            gap = gap.max(best);
        }
        if gap.is_finite() {
            return Ok(gap);
        }
        gap = 0.0;
    }
    let dens = Density::new(dom, metric, Bound::Lower);
    let mut all = geo.to_vec();
    all.extend_from_slice(quasi.vertices());
    let h = field_spacing(dom, &all, params)?;
    let mut pad: f64 = 0.0;
    for &z in &all {
        pad = pad.max(dom.delta(z)?);
    }
    let field = DistanceField::new(dens, geo, &all, 0.5 * pad, h, params)?;
    for &z in quasi.vertices() {
        if geo.contains(&z) {
            continue;
        }
        gap = gap.max(field.at(z));
    }
    Ok(gap)
}

// ---------------------------------------------------------------------------------------------
// Möbius quasi-invariance

/// `ℓ_k` in `T(Ω)` of `T ∘ path` divided by `ℓ_k` of the path in `Ω`, for `T(z) = 1/z`.
pub fn mobius_length_ratio(dom: &Domain, inverted: &Domain, vertices: &[Point], tol: f64) -> Result<f64> {
    let lk = polyline_integral(vertices, tol, |z| qh_density(dom, z))?;
    let lt = polyline_integral(vertices, tol, |z| inverted_qh_density(inverted, z))?;
    Ok(lt / lk)
}

// ---------------------------------------------------------------------------------------------
// Property suite

/// Annular sampling region `{r_min ≤ |z - center| ≤ r_max}`; radii log-uniform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    #[serde(with = "pair")]
    pub center: Point,
    pub r_min: f64,
    pub r_max: f64,
}

mod pair {
    use crate::geom::{pt, Point};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &Point, s: S) -> Result<S::Ok, S::Error> {
        crate::report::point(p, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Point, D::Error> {
        let [x, y] = <[f64; 2]>::deserialize(d)?;
        Ok(pt(x, y))
    }
}

impl Region {
    pub fn for_domain(dom: &Domain) -> Region {
        use crate::domains::ModelTag;
        match dom.model() {
            Some(ModelTag::UnitDisk | ModelTag::PuncturedUnitDisk) => Region { center: pt(0.0, 0.0), r_min: 0.02, r_max: 0.9 },
            Some(ModelTag::PuncturedDisk { o, r }) => Region { center: o, r_min: 0.02 * r, r_max: 0.9 * r },
            Some(ModelTag::Annulus { o, d, m }) => Region { center: o, r_min: d * (-0.9 * m).exp(), r_max: d * (0.9 * m).exp() },
            Some(ModelTag::DiskComplement { o, r }) => Region { center: o, r_min: 1.1 * r, r_max: 10.0 * r },
            Some(ModelTag::HalfPlane { point, direction }) => Region { center: point + direction * pt(0.0, 1.0), r_min: 0.01, r_max: 0.9 },
            _ => {
                let pts = dom.complement_points();
                let c = if pts.is_empty() { pt(0.0, 0.0) } else { pts.iter().sum::<Point>() / pts.len() as f64 };
                let spread = pts.iter().map(|p| (p - c).norm()).fold(0.0, f64::max).max(1.0);
                Region { center: c, r_min: 0.02 * spread, r_max: 3.0 * spread }
            }
        }
    }

    /// A random point of the region inside the domain with `δ ≥ min_delta_frac · |z - center|`.
    pub fn sample(&self, dom: &Domain, rng: &mut ChaCha8Rng, min_delta_frac: f64) -> Result<Point> {
        for _ in 0..10_000 {
            let r = (rng.gen_range(self.r_min.ln()..=self.r_max.ln())).exp();
            let t: f64 = rng.gen_range(-PI..PI);
            let z = self.center + pt(r * t.cos(), r * t.sin());
            if let Ok(d) = dom.delta(z) {
                if d >= min_delta_frac * r.min(1.0) {
                    return Ok(z);
                }
            }
        }
        Err(Error::Parameter("sampling region misses the domain".into()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    #[serde(default)]
    pub checks: Vec<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub region: Option<Region>,
    #[serde(default)]
    pub ceilings: Ceilings,
    #[serde(default)]
    pub decomposition: Option<DecompositionConfig>,
    /// Vertices of the path handed to the decomposition check.
    #[serde(default)]
    pub decomposition_path: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub solver: Option<SolverParams>,
}

fn default_samples() -> usize {
    50
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            checks: Vec::new(),
            seed: 0,
            samples: default_samples(),
            region: None,
            ceilings: Ceilings::default(),
            decomposition: None,
            decomposition_path: None,
            solver: None,
        }
    }
}

pub const ALL_CHECKS: [&str; 12] = [
    "delta_lipschitz",
    "witness_on_boundary",
    "k_ge_j",
    "bpt_contains_exact",
    "beta_annulus_criterion",
    "enlargement_monotone",
    "closed_form_vs_solver",
    "abc_k_geodesics",
    "mobius_quasi_invariance",
    "length_comparison",
    "decomposition",
    "thinness",
];

impl SuiteConfig {
    /// Named presets: `dstar-default` and `c01-scaled`.
    pub fn preset(name: &str) -> Result<SuiteConfig> {
        let base = SuiteConfig { seed: 7, samples: 40, ..Default::default() };
        let list = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        match name {
            "dstar-default" => Ok(SuiteConfig {
                checks: list(&[
                    "delta_lipschitz",
                    "witness_on_boundary",
                    "k_ge_j",
                    "bpt_contains_exact",
                    "beta_annulus_criterion",
                    "enlargement_monotone",
                    "closed_form_vs_solver",
                    "abc_k_geodesics",
                    "mobius_quasi_invariance",
                    "length_comparison",
                ]),
                ..base
            }),
            "c01-scaled" => {
                let w = 2.0 * PI / 3.0;
                Ok(SuiteConfig {
                    checks: list(&[
                        "delta_lipschitz",
                        "witness_on_boundary",
                        "k_ge_j",
                        "beta_annulus_criterion",
                        "enlargement_monotone",
                        "abc_k_geodesics",
                        "mobius_quasi_invariance",
                        "decomposition",
                    ]),
                    samples: 20,
                    decomposition: Some(DecompositionConfig::desk()),
                    decomposition_path: Some(vec![[-1.0, 0.0], [-0.001, 0.0], [w.cos(), w.sin()]]),
                    ..base
                })
            }
            _ => Err(Error::Parameter(format!("unknown suite preset {name:?}"))),
        }
    }

    pub fn from_json(text: &str) -> Result<SuiteConfig> {
        let c: SuiteConfig = serde_json::from_str(text).map_err(|e| Error::Parameter(format!("suite config: {e}")))?;
        for name in &c.checks {
            if !ALL_CHECKS.contains(&name.as_str()) {
                return Err(Error::Parameter(format!("unknown check {name:?}")));
            }
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<CheckResult>,
    pub flags: Vec<String>,
}

struct Ctx<'a> {
    dom: &'a Domain,
    cfg: &'a SuiteConfig,
    region: Region,
    params: SolverParams,
}

impl Ctx<'_> {
    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
    }

    fn points(&self, rng: &mut ChaCha8Rng, n: usize, frac: f64) -> Result<Vec<Point>> {
        (0..n).map(|_| self.region.sample(self.dom, rng, frac)).collect()
    }
}

fn check_delta_lipschitz(c: &Ctx) -> Result<CheckResult> {
    let mut rng = c.rng(1);
    let mut margin = f64::INFINITY;
    let n = c.cfg.samples;
    for _ in 0..n {
        let z = c.region.sample(c.dom, &mut rng, 0.0)?;
        let w = c.region.sample(c.dom, &mut rng, 0.0)?;
        let m = (z - w).norm() - (c.dom.delta(z)? - c.dom.delta(w)?).abs();
        margin = margin.min(m);
    }
    Ok(CheckResult::new("delta_lipschitz", margin >= -1e-12, n, margin, "|z-w| - |delta(z)-delta(w)|"))
}

fn check_witness(c: &Ctx) -> Result<CheckResult> {
    let mut rng = c.rng(2);
    let mut margin = f64::INFINITY;
    let n = c.cfg.samples;
    for _ in 0..n {
        let z = c.region.sample(c.dom, &mut rng, 0.0)?;
        let d = c.dom.delta(z)?;
        let set = c.dom.nearest_boundary_points(z, Domain::default_tol(d))?;
        for w in set.witnesses {
            let on = c.dom.primitives().iter().map(|p| p.distance(w)).fold(f64::INFINITY, f64::min);
            let err = ((w - z).norm() - d).abs().max(on);
            margin = margin.min(Domain::default_tol(d) - err);
        }
    }
    Ok(CheckResult::new("witness_on_boundary", margin >= 0.0, n, margin, "tolerance minus witness error"))
}

fn check_k_ge_j(c: &Ctx) -> Result<CheckResult> {
    let mut rng = c.rng(3);
    let n = (c.cfg.samples / 4).max(3);
    let pairs: Vec<(Point, Point)> = (0..n)
        .map(|_| Ok((c.region.sample(c.dom, &mut rng, 0.05)?, c.region.sample(c.dom, &mut rng, 0.05)?)))
        .collect::<Result<_>>()?;
    let margins: Vec<Result<f64>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let k = metric_distance(c.dom, MetricKind::Quasihyperbolic, a, b, &c.params)?;
            let gp = gehring_palka_lower(c.dom, a, b)?;
            let lower = gp.j.max(gp.delta_ratio);
            Ok((k.lower - lower) / lower.max(1e-12))
        })
        .collect();
    let mut margin = f64::INFINITY;
    for m in margins {
        margin = margin.min(m?);
    }
    Ok(CheckResult::new("k_ge_j", margin >= -0.01, n, margin, "relative excess of k over the j lower bound"))
}

fn check_bpt_exact(c: &Ctx) -> Result<CheckResult> {
    if !has_exact_hyp_density(c.dom) || !c.dom.is_hyperbolic() {
        return Ok(CheckResult::new("bpt_contains_exact", true, 0, f64::INFINITY, "no exact density on this domain"));
    }
    let mut rng = c.rng(4);
    let n = c.cfg.samples;
    let mut margin = f64::INFINITY;
    for _ in 0..n {
        let z = c.region.sample(c.dom, &mut rng, 0.0)?;
        let exact = hyp_density(c.dom, z)?.lower;
        let iv = bpt_interval(c.dom, z)?;
        margin = margin.min((exact - iv.lower) / exact).min((iv.upper - exact) / exact);
    }
    Ok(CheckResult::new("bpt_contains_exact", margin >= -1e-12, n, margin, "relative distance of exact density inside BPt"))
}

fn check_beta_annulus(c: &Ctx) -> Result<CheckResult> {
    let mut rng = c.rng(5);
    let n = c.cfg.samples;
    let mut ok = true;
    let mut used = 0;
    for _ in 0..n {
        let z = c.region.sample(c.dom, &mut rng, 0.0)?;
        let r = beta_at(c.dom, z)?;
        let Some(bp) = r.bp_annulus else { continue };
        used += 1;
        let inside = c.dom.annulus_in_domain(&bp);
        let fatter = Annulus::new(r.zeta, r.delta, r.value * 1.001 + 1e-6)?;
        ok &= inside.inside && inside.touches_one() && !c.dom.annulus_in_domain(&fatter).inside;
    }
    Ok(CheckResult::new("beta_annulus_criterion", ok, used, if ok { 0.0 } else { -1.0 }, "BP(z) in the domain and maximal"))
}

fn check_enlargement(c: &Ctx) -> Result<CheckResult> {
    let mut rng = c.rng(6);
    let n = c.cfg.samples;
    let mut ok = true;
    let mut used = 0;
    for _ in 0..n {
        let z = c.region.sample(c.dom, &mut rng, 0.0)?;
        let r = beta_at(c.dom, z)?;
        let (Some(bp), Some(en)) = (r.bp_annulus, r.enlarged) else { continue };
        used += 1;
        let mem = c.dom.annulus_in_domain(&en);
        ok &= Annulus::is_concentric_within(&bp, &en) && mem.inside && (!en.is_proper() || mem.touches_both());
    }
    Ok(CheckResult::new("enlargement_monotone", ok, used, if ok { 0.0 } else { -1.0 }, "BP(z) inside the enlarged annulus"))
}

fn check_closed_form(c: &Ctx) -> Result<CheckResult> {
    let mut rng = c.rng(7);
    let n = (c.cfg.samples / 8).max(3);
    let mut jobs = Vec::new();
    for metric in [MetricKind::Quasihyperbolic, MetricKind::Hyperbolic] {
        if metric == MetricKind::Hyperbolic && !c.dom.is_hyperbolic() {
            continue;
        }
        for _ in 0..4 * n {
            if jobs.iter().filter(|j: &&(MetricKind, Point, Point, f64)| j.0 == metric).count() >= n {
                break;
            }
            let a = c.region.sample(c.dom, &mut rng, 0.05)?;
            let b = c.region.sample(c.dom, &mut rng, 0.05)?;
            if let Some(d) = closed_form_distance(c.dom, metric, a, b)? {
                if a != b {
                    jobs.push((metric, a, b, d));
                }
            }
        }
    }
    let errs: Vec<Result<f64>> = jobs
        .par_iter()
        .map(|&(metric, a, b, d)| {
            let g = crate::geodesics::solve_geodesic(c.dom, metric, a, b, &c.params)?;
            Ok((g.length.lower - d).abs() / d)
        })
        .collect();
    let mut worst: f64 = 0.0;
    for e in errs {
        worst = worst.max(e?);
    }
    Ok(CheckResult::new("closed_form_vs_solver", worst <= 0.01, jobs.len(), 0.01 - worst, "0.01 minus worst relative error"))
}

fn check_abc(c: &Ctx) -> Result<CheckResult> {
    let mut rng = c.rng(8);
    let n = (c.cfg.samples / 4).max(3);
    let centers = c.dom.complement_points();
    let pairs: Vec<(Point, Point)> = (0..n)
        .map(|_| Ok((c.region.sample(c.dom, &mut rng, 0.05)?, c.region.sample(c.dom, &mut rng, 0.05)?)))
        .collect::<Result<_>>()?;
    let res: Vec<Result<bool>> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let g = geodesic(c.dom, MetricKind::Quasihyperbolic, a, b, &c.params)?;
            Ok(abc_check(c.dom, &g.path, AbcParams::quasihyperbolic(), &centers)?.pass)
        })
        .collect();
    let mut fails = 0;
    for r in res {
        fails += usize::from(!r?);
    }
    Ok(CheckResult::new("abc_k_geodesics", fails == 0, n, 0.0 - fails as f64, "k-geodesics with the (pi, log 2)-ABC property"))
}

fn check_mobius(c: &Ctx) -> Result<CheckResult> {
    if c.dom.contains(pt(0.0, 0.0)) {
        return Ok(CheckResult::new("mobius_quasi_invariance", true, 0, f64::INFINITY, "0 lies in the domain; inversion skipped"));
    }
    let inv = match c.dom.inverted() {
        Ok(d) => d,
        Err(_) => return Ok(CheckResult::new("mobius_quasi_invariance", true, 0, f64::INFINITY, "inversion unsupported")),
    };
    let mut rng = c.rng(9);
    let n = c.cfg.samples;
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    let mut used = 0;
    for _ in 0..n {
        let z = c.region.sample(c.dom, &mut rng, 0.05)?;
        let w = c.region.sample(c.dom, &mut rng, 0.05)?;
        if c.dom.segment_clearance(z, w) <= 0.0 || z == w {
            continue;
        }
        used += 1;
        let r = mobius_length_ratio(c.dom, &inv, &[z, w], 1e-9)?;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    let ok = lo >= 0.5 - 1e-6 && hi <= 2.0 + 1e-6;
    Ok(CheckResult::new("mobius_quasi_invariance", ok, used, (lo - 0.5).min(2.0 - hi), "length ratio under z -> 1/z within [1/2, 2]"))
}

fn check_length_comparison(c: &Ctx) -> Result<CheckResult> {
    if !c.dom.is_hyperbolic() {
        return Ok(CheckResult::new("length_comparison", true, 0, f64::INFINITY, "not hyperbolic"));
    }
    let mut rng = c.rng(10);
    let n = (c.cfg.samples / 4).max(3);
    let pairs: Vec<(Point, Point)> = (0..n)
        .map(|_| Ok((c.region.sample(c.dom, &mut rng, 0.05)?, c.region.sample(c.dom, &mut rng, 0.05)?)))
        .collect::<Result<_>>()?;
    let res: Vec<Result<LengthComparison>> =
        pairs.par_iter().map(|&(a, b)| certify_length_comparison(c.dom, a, b, &c.params, &c.cfg.ceilings)).collect();
    let mut margin = f64::INFINITY;
    let mut ok = true;
    for r in res {
        let r = r?;
        ok &= r.pass;
        if let Some(kb) = r.k_bound {
            margin = margin.min(kb - r.ratio_k[0]);
        }
        if let Some(hb) = r.h_bound {
            margin = margin.min(hb - r.ratio_h[0]);
        }
    }
    Ok(CheckResult::new("length_comparison", ok, n, margin, "ceiling minus worst length ratio"))
}

fn check_decomposition(c: &Ctx, flags: &mut Vec<String>) -> Result<CheckResult> {
    let cfg = c.cfg.decomposition.unwrap_or_else(DecompositionConfig::desk);
    let Some(raw) = &c.cfg.decomposition_path else {
        return Ok(CheckResult::new("decomposition", true, 0, f64::INFINITY, "no decomposition path configured"));
    };
    let path = PathPolyline::new(c.dom, raw.iter().map(|p| pt(p[0], p[1])).collect())?;
    let rep = decompose_good_bad(c.dom, &path, &path, &cfg)?;
    if rep.degenerate_annulus {
        flags.push("degenerate_annulus".into());
    }
    let others_ok = STRUCTURAL_CHECKS.iter().filter(|n| **n != "annuli_proper").all(|n| rep.check(n).map_or(false, |x| x.pass));
    let ok = rep.structural_pass() || (rep.degenerate_annulus && others_ok);
    let detail = format!("n = {}, degenerate = {}", rep.n, rep.degenerate_annulus);
    Ok(CheckResult::new("decomposition", ok, rep.checks.len(), 0.0, detail))
}

fn check_thinness(c: &Ctx) -> Result<CheckResult> {
    let mut rng = c.rng(12);
    let n = (c.cfg.samples / 10).max(2);
    let triples: Vec<[Point; 3]> = (0..n)
        .map(|_| {
            let p = c.points(&mut rng, 3, 0.1)?;
            Ok([p[0], p[1], p[2]])
        })
        .collect::<Result<_>>()?;
    let metric = if c.dom.is_hyperbolic() { MetricKind::Hyperbolic } else { MetricKind::Quasihyperbolic };
    let r = thinness_estimate(c.dom, metric, &triples, &c.params)?;
    let ok = r.max_thinness.is_finite() && r.refinement_change <= 0.1;
    Ok(CheckResult::new("thinness", ok, n, 0.1 - r.refinement_change, format!("max thinness {:.4}", r.max_thinness)))
}

/// Runs the configured property checks; each is deterministic under the seed.
pub fn run_suite(dom: &Domain, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let params = cfg.solver.unwrap_or_default();
    params.validate()?;
    let ctx = Ctx { dom, cfg, region: cfg.region.unwrap_or_else(|| Region::for_domain(dom)), params };
    let results: Vec<(Result<CheckResult>, Vec<String>)> = cfg
        .checks
        .par_iter()
        .map(|name| {
            let mut flags = Vec::new();
            let r = match name.as_str() {
                "delta_lipschitz" => check_delta_lipschitz(&ctx),
                "witness_on_boundary" => check_witness(&ctx),
                "k_ge_j" => check_k_ge_j(&ctx),
                "bpt_contains_exact" => check_bpt_exact(&ctx),
                "beta_annulus_criterion" => check_beta_annulus(&ctx),
                "enlargement_monotone" => check_enlargement(&ctx),
                "closed_form_vs_solver" => check_closed_form(&ctx),
                "abc_k_geodesics" => check_abc(&ctx),
                "mobius_quasi_invariance" => check_mobius(&ctx),
                "length_comparison" => check_length_comparison(&ctx),
                "decomposition" => check_decomposition(&ctx, &mut flags),
                "thinness" => check_thinness(&ctx),
                other => Err(Error::Parameter(format!("unknown check {other:?}"))),
            };
            (r, flags)
        })
        .collect();
    let mut checks = Vec::new();
    let mut flags = Vec::new();
    for (name, (r, f)) in cfg.checks.iter().zip(results) {
        flags.extend(f);
        checks.push(match r {
            Ok(c) => c,
            Err(e) => CheckResult::new(name, false, 0, f64::NEG_INFINITY, format!("error: {e}")),
        });
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(SuiteReport { schema_version: SCHEMA_VERSION, seed: cfg.seed, pass, checks, flags })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesics::exact_geodesic;

    #[test]
    fn radial_geodesic_has_abc() {
        let d = Domain::punctured_unit_disk();
        let g = exact_geodesic(&d, MetricKind::Quasihyperbolic, pt(0.1, 0.0), pt(0.4, 0.0)).unwrap().unwrap();
        let r = abc_check(&d, &g.path, AbcParams::quasihyperbolic(), &[pt(0.0, 0.0)]).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn doubled_path_breaks_abc() {
        let d = Domain::punctured_unit_disk();
        let p = PathPolyline::new(&d, vec![pt(0.01, 0.0), pt(1e-6, 0.0), pt(0.01, 0.0)]).unwrap();
        let r = abc_check(&d, &p, AbcParams::new(PI, PI).unwrap(), &[pt(0.0, 0.0)]).unwrap();
        assert!(!r.pass);
        let v = r.violation.unwrap();
        assert!(v.rho_min < v.d * (-PI).exp());
    }

    #[test]
    fn monotone_radius_is_vacuous() {
        let d = Domain::punctured_unit_disk();
        let p = PathPolyline::new(&d, vec![pt(0.1, 0.0), pt(0.5, 0.0)]).unwrap();
        let r = abc_check(&d, &p, AbcParams::new(1.0, 0.5).unwrap(), &[pt(0.0, 0.0)]).unwrap();
        assert!(r.pass);
        assert_eq!(r.circles_checked, 0);
    }

    #[test]
    fn decomposition_three_points() {
        let d = Domain::punctured_at(&[pt(0.0, 0.0), pt(0.01, 0.0), pt(1.0, 0.0)]).unwrap();
        let p = PathPolyline::new(&d, vec![pt(-0.01, 0.0), pt(-1.0, 0.0)]).unwrap();
        let r = decompose_good_bad(&d, &p, &p, &DecompositionConfig::desk()).unwrap();
        assert_eq!(r.n, 1);
        assert!(r.structural_pass(), "{:?}", r.checks);
        let a = r.annuli[0];
        assert!((a.inner_radius() - 0.01).abs() < 1e-12 && (a.outer_radius() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn decomposition_flags_degenerate() {
        let d = Domain::twice_punctured_plane();
        let w = 2.0 * PI / 3.0;
        let p = PathPolyline::new(&d, vec![pt(-1.0, 0.0), pt(-0.001, 0.0), pt(w.cos(), w.sin())]).unwrap();
        let r = decompose_good_bad(&d, &p, &p, &DecompositionConfig::desk()).unwrap();
        assert!(r.degenerate_annulus);
        assert!(!r.check("annuli_proper").unwrap().pass);
    }

    #[test]
    fn decomposition_rejects_large_endpoint_beta() {
        let d = Domain::twice_punctured_plane();
        let p = PathPolyline::new(&d, vec![pt(-0.001, 0.0), pt(-1.0, 0.0)]).unwrap();
        assert!(matches!(decompose_good_bad(&d, &p, &p, &DecompositionConfig::desk()), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn empty_suite_passes() {
        let r = run_suite(&Domain::punctured_unit_disk(), &SuiteConfig::default()).unwrap();
        assert!(r.pass && r.checks.is_empty());
    }

    #[test]
    fn gap_of_a_geodesic_with_itself() {
        let c = Domain::punctured_plane(pt(0.0, 0.0));
        let g = exact_geodesic(&c, MetricKind::Quasihyperbolic, pt(1.0, 0.0), pt(0.0, 2.0)).unwrap().unwrap();
        let gap = stability_gap(&c, MetricKind::Quasihyperbolic, &g.path, g.path.vertices(), &SolverParams::default()).unwrap();
        assert_eq!(gap, 0.0);
    }
}
