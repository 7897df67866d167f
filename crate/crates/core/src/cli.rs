//! Command-line front end. Every verb prints one JSON document on standard output.
//!
//! Exit codes: 0 success, 2 validation error, 3 solver resolution error, 4 failed certification.

use crate::analysis::{
    abc_check, bad_arc_q, certify_bad_arc_ratios, certify_length_comparison, decompose_good_bad, run_suite,
    thinness_estimate, AbcParams, Ceilings, DecompositionConfig, Region, SuiteConfig, SCHEMA_VERSION,
};
use crate::beta::{beta_at, beta_window_bounds};
use crate::domains::Domain;
use crate::error::{Error, Result};
use crate::geodesics::{exact_geodesic, geodesic, metric_distance, solve_geodesic, SolverParams};
use crate::geom::{pt, Annulus, Point};
use crate::metrics::{closed_form_distance, hyp_density, qh_density, DensityInterval, MetricKind, PathPolyline};
use crate::report::{annulus_json, to_json_value};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "qhgeom", version, about = "Hyperbolic and quasihyperbolic geometry of plane domains")]
struct Cli {
    /// Seed for every randomized computation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for suites and batched solver queries.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Solver {
    /// Initial grid spacing relative to min(δ(a), δ(b)).
    #[arg(long, default_value_t = SolverParams::default().initial_spacing)]
    initial_spacing: f64,
    #[arg(long, default_value_t = SolverParams::default().refine_factor)]
    refine_factor: f64,
    #[arg(long, default_value_t = SolverParams::default().max_refinements)]
    max_refinements: u32,
    #[arg(long, default_value_t = SolverParams::default().boundary_margin_cells)]
    boundary_margin_cells: u32,
    #[arg(long, default_value_t = SolverParams::default().neighbor_stencil)]
    neighbor_stencil: u32,
    #[arg(long, default_value_t = SolverParams::default().convergence_rel_tol)]
    convergence_rel_tol: f64,
    #[arg(long, default_value_t = SolverParams::default().max_nodes)]
    max_nodes: usize,
}

impl Solver {
    fn params(&self) -> Result<SolverParams> {
        let p = SolverParams {
            initial_spacing: self.initial_spacing,
            refine_factor: self.refine_factor,
            max_refinements: self.max_refinements,
            boundary_margin_cells: self.boundary_margin_cells,
            neighbor_stencil: self.neighbor_stencil,
            convergence_rel_tol: self.convergence_rel_tol,
            max_nodes: self.max_nodes,
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distance between two points.
    Distance {
        domain: PathBuf,
        #[arg(long, value_parser = parse_metric)]
        metric: MetricKind,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        a: Point,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        b: Point,
        /// Always use the grid solver, even when a closed form exists.
        #[arg(long)]
        solver_only: bool,
        #[command(flatten)]
        solver: Solver,
    },
    /// Geodesic between two points.
    Geodesic {
        domain: PathBuf,
        #[arg(long, value_parser = parse_metric)]
        metric: MetricKind,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        a: Point,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        b: Point,
        /// Write the path vertices as CSV (columns x,y).
        #[arg(long)]
        emit_polyline: Option<PathBuf>,
        #[arg(long)]
        solver_only: bool,
        #[command(flatten)]
        solver: Solver,
    },
    /// Metric density at a point, or a CSV raster with --grid.
    Density {
        domain: PathBuf,
        #[arg(long, value_parser = parse_metric)]
        metric: MetricKind,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        z: Option<Point>,
        /// CSV output (x,y,value_lower,value_upper) over --bbox.
        #[arg(long)]
        grid: Option<PathBuf>,
        /// x0,y0,x1,y1
        #[arg(long, allow_hyphen_values = true)]
        bbox: Option<String>,
        /// Samples per axis.
        #[arg(long, default_value_t = 64)]
        n: usize,
    },
    /// β(z), its witnesses, BP(z) and the enlarged annulus.
    Beta {
        domain: PathBuf,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        z: Point,
    },
    /// Membership of A(o; d, m) in the domain, and the β window at --z.
    Annulus {
        domain: PathBuf,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        center: Point,
        #[arg(long)]
        d: f64,
        #[arg(long)]
        m: f64,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        z: Option<Point>,
    },
    /// ABC check of a geodesic (or of --path) about the complement points.
    Abc {
        domain: PathBuf,
        #[arg(long, value_parser = parse_metric)]
        metric: MetricKind,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        a: Option<Point>,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        b: Option<Point>,
        /// CSV polyline (x,y per line) to check instead of a geodesic.
        #[arg(long)]
        path: Option<PathBuf>,
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        nu: Option<f64>,
        #[command(flatten)]
        solver: Solver,
    },
    /// Good/bad decomposition of a path.
    Decompose {
        domain: PathBuf,
        /// CSV polyline used as both the hyperbolic and the quasihyperbolic path.
        #[arg(long)]
        path: Option<PathBuf>,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        a: Option<Point>,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        b: Option<Point>,
        /// desk or default.
        #[arg(long, default_value = "desk")]
        preset: String,
        /// S,M,L,XL overriding the preset.
        #[arg(long)]
        thresholds: Option<String>,
        #[command(flatten)]
        solver: Solver,
    },
    /// Length-comparison certificate; with --bad-arc, the bad-arc ratio certificate.
    Certify {
        domain: PathBuf,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        a: Option<Point>,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        b: Option<Point>,
        #[arg(long)]
        k_ceiling: Option<f64>,
        #[arg(long)]
        h_ceiling: Option<f64>,
        #[arg(long, default_value_t = 0.02)]
        slack: f64,
        #[arg(long)]
        bad_arc: bool,
        /// Annulus A as center_x,center_y,d,m.
        #[arg(long, allow_hyphen_values = true)]
        annulus: Option<String>,
        /// Σ as center_x,center_y,d,m.
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[command(flatten)]
        solver: Solver,
    },
    /// Thinness of geodesic triangles.
    Thinness {
        domain: PathBuf,
        #[arg(long, value_parser = parse_metric)]
        metric: MetricKind,
        /// x1,y1;x2,y2;x3,y3 (repeatable).
        #[arg(long, allow_hyphen_values = true)]
        triangle: Vec<String>,
        /// Number of random triangles added.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[command(flatten)]
        solver: Solver,
    },
    /// Property suite from a preset or a JSON configuration.
    Suite {
        domain: PathBuf,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn parse_point(s: &str) -> std::result::Result<Point, String> {
    let v = parse_reals(s, 2)?;
    Ok(pt(v[0], v[1]))
}

fn parse_reals(s: &str, n: usize) -> std::result::Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    if v.len() != n || v.iter().any(|x| !x.is_finite()) {
        return Err(format!("expected {n} finite comma-separated numbers, got {s:?}"));
    }
    Ok(v)
}

fn parse_metric(s: &str) -> std::result::Result<MetricKind, String> {
    MetricKind::parse(s).map_err(|e| e.to_string())
}

fn param(r: std::result::Result<Vec<f64>, String>) -> Result<Vec<f64>> {
    r.map_err(Error::Parameter)
}

fn load_domain(path: &PathBuf) -> Result<Domain> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Domain::from_json(&text)
}

fn read_polyline(path: &PathBuf) -> Result<Vec<Point>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if line.starts_with('x') || line.starts_with('#') {
            continue;
        }
        let v = param(parse_reals(line, 2))?;
        out.push(pt(v[0], v[1]));
    }
    Ok(out)
}

fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn pair(p: Point) -> Value {
    json!([p.re, p.im])
}

fn interval_json(d: &DensityInterval) -> Value {
    if d.exact {
        json!(d.lower)
    } else {
        to_json_value(d)
    }
}

fn polyline_csv(v: &[Point]) -> String {
    let mut s = String::from("x,y\n");
    for p in v {
        s.push_str(&format!("{:.17e},{:.17e}\n", p.re, p.im));
    }
    s
}

fn annulus_arg(s: &Option<String>, name: &str) -> Result<Annulus> {
    let s = s.as_ref().ok_or_else(|| Error::Parameter(format!("--{name} is required")))?;
    let v = param(parse_reals(s, 4))?;
    Annulus::new(pt(v[0], v[1]), v[2], v[3])
}

fn need(p: Option<Point>, name: &str) -> Result<Point> {
    p.ok_or_else(|| Error::Parameter(format!("--{name} is required")))
}

/// Outcome of a verb: the report and whether a certification failed.
struct Outcome {
    report: Value,
    certified: bool,
}

impl From<Value> for Outcome {
    fn from(report: Value) -> Self {
        Outcome { report, certified: true }
    }
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let seed = cli.seed;
    match &cli.command {
        Command::Distance { domain, metric, a, b, solver_only, solver } => {
            let dom = load_domain(domain)?;
            let params = solver.params()?;
            let closed = if *solver_only { None } else { closed_form_distance(&dom, *metric, *a, *b)? };
            let (d, method, spacing) = match closed {
                Some(d) => (DensityInterval::exact(d), "closed_form", None),
                None if a == b => (metric_distance(&dom, *metric, *a, *b, &params)?, "closed_form", None),
                None => {
                    let g = solve_geodesic(&dom, *metric, *a, *b, &params)?;
                    (g.length, "grid", g.grid_spacing)
                }
            };
            Ok(json!({
                "metric": metric.symbol(),
                "a": pair(*a),
                "b": pair(*b),
                "distance": interval_json(&d),
                "method": method,
                "grid_spacing": spacing,
            })
            .into())
        }
        Command::Geodesic { domain, metric, a, b, emit_polyline, solver_only, solver } => {
            let dom = load_domain(domain)?;
            let params = solver.params()?;
            let g = if *solver_only {
                solve_geodesic(&dom, *metric, *a, *b, &params)?
            } else {
                match exact_geodesic(&dom, *metric, *a, *b)? {
                    Some(g) => g,
                    None => geodesic(&dom, *metric, *a, *b, &params)?,
                }
            };
            if let Some(path) = emit_polyline {
                write_file(path, &polyline_csv(g.path.vertices()))?;
            }
            Ok(json!({
                "metric": metric.symbol(),
                "method": g.method,
                "length": interval_json(&g.length),
                "grid_spacing": g.grid_spacing,
                "chordarc_lambda": g.chordarc_lambda,
                "vertex_count": g.path.vertices().len(),
                "path": g.path.vertices().iter().map(|p| pair(*p)).collect::<Vec<_>>(),
            })
            .into())
        }
        Command::Density { domain, metric, z, grid, bbox, n } => {
            let dom = load_domain(domain)?;
            let eval = |w: Point| -> Result<DensityInterval> {
                match metric {
                    MetricKind::Quasihyperbolic => qh_density(&dom, w).map(DensityInterval::exact),
                    MetricKind::Hyperbolic => hyp_density(&dom, w),
                }
            };
            let mut out = json!({ "metric": metric.symbol() });
            if let Some(z) = z {
                out["z"] = pair(*z);
                out["density"] = to_json_value(&eval(*z)?);
            }
            if let Some(path) = grid {
                let bb = bbox.as_ref().ok_or_else(|| Error::Parameter("--grid needs --bbox x0,y0,x1,y1".into()))?;
                let b = param(parse_reals(bb, 4))?;
                if *n < 2 || !(b[2] > b[0] && b[3] > b[1]) {
                    return Err(Error::Parameter("--bbox must be non-degenerate and --n at least 2".into()));
                }
                let mut csv = String::from("x,y,value_lower,value_upper\n");
                let mut written = 0;
                for j in 0..*n {
                    for i in 0..*n {
                        let w = pt(
                            b[0] + (b[2] - b[0]) * i as f64 / (*n - 1) as f64,
                            b[1] + (b[3] - b[1]) * j as f64 / (*n - 1) as f64,
                        );
                        if let Ok(v) = eval(w) {
                            if v.lower.is_finite() && v.upper.is_finite() {
                                csv.push_str(&format!("{},{},{},{}\n", w.re, w.im, v.lower, v.upper));
                                written += 1;
                            }
                        }
                    }
                }
                write_file(path, &csv)?;
                out["grid_points"] = json!(written);
                out["grid_file"] = json!(path.display().to_string());
            }
            if z.is_none() && grid.is_none() {
                return Err(Error::Parameter("density needs --z or --grid".into()));
            }
            Ok(out.into())
        }
        Command::Beta { domain, z } => {
            let dom = load_domain(domain)?;
            let r = beta_at(&dom, *z)?;
            Ok(json!({
                "z": pair(*z),
                "beta": r.value,
                "zeta": pair(r.zeta),
                "xi": pair(r.xi),
                "delta": r.delta,
                "bp_annulus": r.bp_annulus.as_ref().map(annulus_json),
                "enlarged": r.enlarged.as_ref().map(annulus_json),
            })
            .into())
        }
        Command::Annulus { domain, center, d, m, z } => {
            let dom = load_domain(domain)?;
            let a = Annulus::new(*center, *d, *m)?;
            let mem = dom.annulus_in_domain(&a);
            let mut out = json!({ "annulus": annulus_json(&a), "membership": to_json_value(&mem) });
            if let Some(z) = z {
                let (lo, hi) = beta_window_bounds(&a, *z)?;
                out["z"] = pair(*z);
                out["beta_window"] = json!([lo, hi]);
                out["beta"] = json!(crate::beta::beta_value(&dom, *z)?);
            }
            Ok(out.into())
        }
        Command::Abc { domain, metric, a, b, path, mu, nu, solver } => {
            let dom = load_domain(domain)?;
            let p = match path {
                Some(f) => PathPolyline::new(&dom, read_polyline(f)?)?,
                None => geodesic(&dom, *metric, need(*a, "a")?, need(*b, "b")?, &solver.params()?)?.path,
            };
            let defaults = AbcParams::for_metric(*metric);
            let params = AbcParams::new(mu.unwrap_or(defaults.mu), nu.unwrap_or(defaults.nu))?;
            let r = abc_check(&dom, &p, params, &dom.complement_points())?;
            Ok(json!({ "metric": metric.symbol(), "abc": to_json_value(&r) }).into())
        }
        Command::Decompose { domain, path, a, b, preset, thresholds, solver } => {
            let dom = load_domain(domain)?;
            let mut cfg = match preset.as_str() {
                "desk" => DecompositionConfig::desk(),
                "default" => DecompositionConfig::default(),
                other => return Err(Error::Parameter(format!("unknown decomposition preset {other:?}"))),
            };
            if let Some(t) = thresholds {
                let v = param(parse_reals(t, 4))?;
                cfg = DecompositionConfig { s: v[0], m: v[1], l: v[2], xl: v[3], ..cfg };
            }
            let (gh, gk) = match path {
                Some(f) => {
                    let p = PathPolyline::new(&dom, read_polyline(f)?)?;
                    (p.clone(), p)
                }
                None => {
                    let (a, b) = (need(*a, "a")?, need(*b, "b")?);
                    let params = solver.params()?;
                    (
                        geodesic(&dom, MetricKind::Hyperbolic, a, b, &params)?.path,
                        geodesic(&dom, MetricKind::Quasihyperbolic, a, b, &params)?.path,
                    )
                }
            };
            let r = decompose_good_bad(&dom, &gh, &gk, &cfg)?;
            Ok(json!({ "decomposition": to_json_value(&r), "structural_pass": r.structural_pass() }).into())
        }
        Command::Certify { domain, a, b, k_ceiling, h_ceiling, slack, bad_arc, annulus, sigma, lambda, q, trials, solver } => {
            let dom = load_domain(domain)?;
            let params = solver.params()?;
            if *bad_arc {
                let a_ann = annulus_arg(annulus, "annulus")?;
                let s_ann = annulus_arg(sigma, "sigma")?;
                let q = q.unwrap_or_else(|| bad_arc_q(*lambda));
                let r = certify_bad_arc_ratios(&dom, &a_ann, q, &s_ann, *lambda, *trials, seed, &params, 0.05)?;
                Ok(Outcome { certified: r.pass, report: json!({ "bad_arc": to_json_value(&r), "pass": r.pass }) })
            } else {
                let ceilings = Ceilings { k_ceiling: *k_ceiling, h_ceiling: *h_ceiling, slack: *slack };
                let r = certify_length_comparison(&dom, need(*a, "a")?, need(*b, "b")?, &params, &ceilings)?;
                Ok(Outcome { certified: r.pass, report: json!({ "length_comparison": to_json_value(&r), "pass": r.pass }) })
            }
        }
        Command::Thinness { domain, metric, triangle, random, solver } => {
            let dom = load_domain(domain)?;
            let params = solver.params()?;
            let mut triples = Vec::new();
            for t in triangle {
                let pts: Vec<Point> =
                    t.split(';').map(|s| parse_point(s).map_err(Error::Parameter)).collect::<Result<_>>()?;
                if pts.len() != 3 {
                    return Err(Error::Parameter(format!("triangle needs three points: {t:?}")));
                }
                triples.push([pts[0], pts[1], pts[2]]);
            }
            let region = Region::for_domain(&dom);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..*random {
                let mut p = [pt(0.0, 0.0); 3];
                for x in p.iter_mut() {
                    *x = region.sample(&dom, &mut rng, 0.1)?;
                }
                triples.push(p);
            }
            if triples.is_empty() {
                return Err(Error::Parameter("thinness needs --triangle or --random".into()));
            }
            let r = thinness_estimate(&dom, *metric, &triples, &params)?;
            Ok(json!({ "thinness": to_json_value(&r) }).into())
        }
        Command::Suite { domain, preset, config } => {
            let dom = load_domain(domain)?;
            let mut cfg = match (preset, config) {
                (Some(p), None) => SuiteConfig::preset(p)?,
                (None, Some(f)) => {
                    let text = std::fs::read_to_string(f).map_err(|e| Error::Io(format!("{}: {e}", f.display())))?;
                    SuiteConfig::from_json(&text)?
                }
                (None, None) => SuiteConfig::preset("dstar-default")?,
                (Some(_), Some(_)) => return Err(Error::Parameter("give either --preset or --config".into())),
            };
            if seed != 0 {
                cfg.seed = seed;
            }
            let r = run_suite(&dom, &cfg)?;
            Ok(Outcome { certified: r.pass, report: to_json_value(&r) })
        }
    }
}

fn init_logging() {
    // errors also go to stdout as JSON, so quiet drops stderr entirely
    let level = match std::env::var("CM_LOG").as_deref() {
        Ok("debug") => log::LevelFilter::Debug,
        Ok("info") => log::LevelFilter::Info,
        Ok("quiet") => log::LevelFilter::Off,
        _ => log::LevelFilter::Warn,
    };
    let _ = env_logger::Builder::new()
        .filter_level(level)
        .target(env_logger::Target::Stderr)
        .try_init();
}

fn emit(mut v: Value) {
    if let Value::Object(m) = &mut v {
        m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    }
    let text = serde_json::to_string_pretty(&v).expect("report serialization");
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    init_logging();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.jobs {
        if n == 0 {
            emit(json!({ "error": { "kind": "validation", "message": "--jobs must be positive" } }));
            return 2;
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match execute(&cli) {
        Ok(o) => {
            emit(o.report);
            if o.certified {
                0
            } else {
                4
            }
        }
        Err(e) => {
            let kind = if e.exit_code() == 3 { "resolution" } else { "validation" };
            log::error!("{e}");
            emit(json!({ "error": { "kind": kind, "message": e.to_string() } }));
            e.exit_code()
        }
    }
}
