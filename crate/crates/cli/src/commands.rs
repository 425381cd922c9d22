use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use sha2::{Digest, Sha256};
use vallab_core::affine::{affine_length_subdivision, affine_surface_area_smooth};
use vallab_core::dehn::{
    dehn_symbol, hilbert3_report_with_volume, symbol_equal, DehnSymbol, RelationVerdict, VerdictKind, DEFAULT_DIGITS,
    DEFAULT_HEIGHT,
};
use vallab_core::fconv::{conjugate_max_affine, split_pair, Domain, MaxAffineFunc, PolyhedralFunc};
use vallab_core::fval::{
    epi_homog_components, exp_integral, function_valuation_check, functional_intrinsic, monge_ampere,
    vertical_shift_check, DensityFunc, FuncFlags, FuncValuation, SteinerInput,
};
use vallab_core::geom::{ball_polygon, ball_polytope, factorial, Hyperplane, Vector};
use vallab_core::intrinsic::{
    canonical_simplex_decomposition, cylinder_decomposition, intrinsic_volumes, kappa, kinematic_integral_mc,
    kinematic_integral_mc_window, steiner_check, KinematicEstimate,
};

use crate::error::{CliError, CliResult};
use crate::json::{format_real, object, real, reals, rows, to_string};
use crate::spec::{BodySpec, DensitySpec, Func, FuncSpec};

/// Residual bound used by `check`.
pub const CHECK_TOL: f64 = 1e-8;

#[derive(Parser, Debug)]
#[command(name = "vallab", version, about = "Valuations on convex bodies and convex functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Intrinsic volumes of a polytope.
    Intrinsic {
        #[arg(long)]
        body: PathBuf,
    },
    /// Steiner polynomial of a polytope, or the functional Steiner fit.
    Steiner(SteinerArgs),
    /// Canonical or cylinder decomposition of a simplex.
    Decompose(DecomposeArgs),
    /// Compare the Dehn invariants of two polytopes in R^3.
    Dehn {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value_t = DEFAULT_HEIGHT)]
        height: u64,
        #[arg(long, default_value_t = DEFAULT_DIGITS)]
        digits: u32,
    },
    /// Cube versus regular tetrahedron of equal volume.
    Hilbert3 {
        #[arg(long, default_value_t = 1.0)]
        volume: f64,
        #[arg(long, default_value_t = DEFAULT_HEIGHT)]
        height: u64,
        #[arg(long, default_value_t = DEFAULT_DIGITS)]
        digits: u32,
    },
    /// Affine length of a planar body by dyadic support-triangle subdivision.
    Affinelength {
        #[arg(long)]
        body: PathBuf,
        #[arg(long, default_value_t = 12)]
        depth: u32,
        /// Write the per-level trace as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Gauss nodes of the reference quadrature.
        #[arg(long, default_value_t = 512)]
        nodes: usize,
    },
    /// Monte Carlo estimate of the planar kinematic integral.
    Kinematic {
        #[arg(long)]
        k: PathBuf,
        #[arg(long)]
        l: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        /// Half-width of the translation window; chosen automatically if absent.
        #[arg(long)]
        window: Option<f64>,
        /// Write estimates at doubling sample sizes as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Evaluate a valuation on a convex function.
    Fval(FvalArgs),
    /// Epi-homogeneous components of a valuation on a convex function.
    #[command(name = "decompose-fval")]
    DecomposeFval(FvalArgs),
    /// Valuation and vertical-shift identities on generated functions.
    Check {
        #[arg(long, value_enum)]
        valuation: ValuationName,
        #[arg(long, value_enum, default_value = "split")]
        pairs: PairKind,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long)]
        zeta: Option<PathBuf>,
    },
    /// Print the canonical form of a specification.
    Canon {
        #[arg(long, group = "input")]
        body: Option<PathBuf>,
        #[arg(long, group = "input")]
        func: Option<PathBuf>,
        #[arg(long, group = "input")]
        density: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct SteinerArgs {
    #[arg(long, required_unless_present = "func", conflicts_with = "func")]
    body: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.5,1")]
    radii: Vec<f64>,
    /// Vertices (or directions) of the ball approximation.
    #[arg(long, default_value_t = 256)]
    ball_k: usize,
    /// Indicator or radial_quadratic function for the functional fit.
    #[arg(long, requires = "alpha")]
    func: Option<PathBuf>,
    /// half_line density table.
    #[arg(long)]
    alpha: Option<PathBuf>,
    /// Radii at which the functional is sampled.
    #[arg(long, value_delimiter = ',')]
    nodes: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    #[arg(long)]
    simplex: PathBuf,
    /// Canonical decomposition parameter in (0, 1).
    #[arg(long, required_unless_present = "m", conflicts_with = "m")]
    t: Option<f64>,
    /// Dilation factor of the cylinder decomposition.
    #[arg(long)]
    m: Option<usize>,
}

#[derive(Args, Debug)]
pub struct FvalArgs {
    #[arg(long, value_enum)]
    valuation: ValuationName,
    #[arg(long)]
    func: PathBuf,
    #[arg(long)]
    zeta: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValuationName {
    #[value(name = "exp_min")]
    ExpMin,
    #[value(name = "exp_integral")]
    ExpIntegral,
    #[value(name = "grad")]
    Grad,
    #[value(name = "monge_ampere")]
    MongeAmpere,
    /// The square of exp_integral, which is not a valuation.
    #[value(name = "exp_integral_squared")]
    ExpIntegralSquared,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    /// `(u + ind_{H⁺}, u + ind_{H⁻})` for random `u` and hyperplanes `H`.
    Split,
    /// `u` against `u + t`.
    Shift,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    CheckFailed,
    Unknown,
}

impl Status {
    fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::CheckFailed => 1,
            Status::Unknown => 3,
        }
    }

    fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::CheckFailed => "check_failed",
            Status::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Default)]
struct Report {
    results: Vec<(&'static str, Value)>,
    residuals: Vec<(&'static str, Value)>,
    tolerances: Vec<(&'static str, Value)>,
    status: Option<Status>,
}

impl Report {
    fn result(&mut self, key: &'static str, v: Value) -> &mut Self {
        self.results.push((key, v));
        self
    }

    fn residual(&mut self, key: &'static str, x: f64) -> &mut Self {
        self.residuals.push((key, real(x)));
        self
    }

    fn tolerance(&mut self, key: &'static str, x: f64) -> &mut Self {
        self.tolerances.push((key, real(x)));
        self
    }
}

/// Inputs read so far, digested into the report.
struct Context {
    seed: u64,
    inputs: Vec<(String, Vec<u8>)>,
}

impl Context {
    fn read(&mut self, path: &Path) -> CliResult<String> {
        let name = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: name.clone(), source })?;
        self.inputs.push((name, text.as_bytes().to_vec()));
        Ok(text)
    }

    fn digest(&self) -> String {
        let mut h = Sha256::new();
        for (name, bytes) in &self.inputs {
            h.update(name.as_bytes());
            h.update([0u8]);
            h.update((bytes.len() as u64).to_le_bytes());
            h.update(bytes);
        }
        h.finalize().iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }

    fn body(&mut self, path: &Path) -> CliResult<crate::spec::Body> {
        BodySpec::parse(&self.read(path)?)?.build()
    }

    fn func(&mut self, path: &Path) -> CliResult<Func> {
        FuncSpec::parse(&self.read(path)?)?.build()
    }

    fn density(&mut self, path: &Path) -> CliResult<DensityFunc> {
        DensitySpec::parse(&self.read(path)?)?.build()
    }
}

/// Seed from `VALLAB_SEED`, default 0.
pub fn seed_from_env() -> CliResult<u64> {
    match std::env::var("VALLAB_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| CliError::Validation(format!("VALLAB_SEED={s:?} is not an integer"))),
        Err(_) => Ok(0),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Intrinsic { .. } => "intrinsic",
        Command::Steiner(_) => "steiner",
        Command::Decompose(_) => "decompose",
        Command::Dehn { .. } => "dehn",
        Command::Hilbert3 { .. } => "hilbert3",
        Command::Affinelength { .. } => "affinelength",
        Command::Kinematic { .. } => "kinematic",
        Command::Fval(_) => "fval",
        Command::DecomposeFval(_) => "decompose-fval",
        Command::Check { .. } => "check",
        Command::Canon { .. } => "canon",
    }
}

/// Runs a command and returns the text for standard output and the exit
/// code.
pub fn execute(command: &Command, argv: &[String]) -> (String, u8) {
    let start = Instant::now();
    let seed = seed_from_env();
    let mut ctx = Context { seed: *seed.as_ref().unwrap_or(&0), inputs: Vec::new() };
    if let Command::Canon { body, func, density } = command {
        return match canon(&mut ctx, body.as_deref(), func.as_deref(), density.as_deref()) {
            Ok(text) => (text, 0),
            Err(e) => (to_string(&error_value(&e)), e.exit_code()),
        };
    }
    let outcome = seed.and_then(|_| dispatch(&mut ctx, command));
    let mut top = vec![
        ("command", Value::from(command_name(command))),
        ("argv", Value::from(argv.to_vec())),
        ("inputs", Value::from(ctx.inputs.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>())),
        ("inputs_digest", Value::from(ctx.digest())),
        ("seed", Value::from(ctx.seed)),
    ];
    let code = match outcome {
        Ok(report) => {
            let status = report.status.unwrap_or(Status::Ok);
            top.push(("status", status.as_str().into()));
            top.push(("results", object(report.results)));
            top.push(("residuals", object(report.residuals)));
            top.push(("tolerances", object(report.tolerances)));
            top.push(("error", Value::Null));
            status.exit_code()
        }
        Err(e) => {
            top.push(("status", "error".into()));
            top.push(("error", error_value(&e)));
            e.exit_code()
        }
    };
    top.push(("wall_time_s", real(start.elapsed().as_secs_f64())));
    (to_string(&object(top)), code)
}

fn error_value(e: &CliError) -> Value {
    let mut fields = vec![("kind", Value::from(e.kind())), ("message", Value::from(e.to_string()))];
    if let Some(d) = e.detail() {
        fields.push(("detail", d));
    }
    object(fields)
}

fn canon(ctx: &mut Context, body: Option<&Path>, func: Option<&Path>, density: Option<&Path>) -> CliResult<String> {
    let value = match (body, func, density) {
        (Some(p), _, _) => BodySpec::parse(&ctx.read(p)?)?.to_value(),
        (_, Some(p), _) => FuncSpec::parse(&ctx.read(p)?)?.to_value(),
        (_, _, Some(p)) => DensitySpec::parse(&ctx.read(p)?)?.to_value(),
        _ => return Err(CliError::Validation("one of --body, --func, --density is required".into())),
    };
    Ok(to_string(&value))
}

fn dispatch(ctx: &mut Context, command: &Command) -> CliResult<Report> {
    match command {
        Command::Intrinsic { body } => intrinsic(ctx, body),
        Command::Steiner(args) => steiner(ctx, args),
        Command::Decompose(args) => decompose(ctx, args),
        Command::Dehn { a, b, height, digits } => dehn(ctx, a, b, *height, *digits),
        Command::Hilbert3 { volume, height, digits } => hilbert3(*volume, *height, *digits),
        Command::Affinelength { body, depth, csv, nodes } => affine_length(ctx, body, *depth, csv.as_deref(), *nodes),
        Command::Kinematic { k, l, samples, window, csv } => kinematic(ctx, k, l, *samples, *window, csv.as_deref()),
        Command::Fval(args) => fval(ctx, args),
        Command::DecomposeFval(args) => decompose_fval(ctx, args),
        Command::Check { valuation, pairs, count, zeta } => check(ctx, *valuation, *pairs, *count, zeta.as_deref()),
        Command::Canon { .. } => unreachable!("handled before dispatch"),
    }
}

fn intrinsic(ctx: &mut Context, body: &Path) -> CliResult<Report> {
    let body = ctx.body(body)?;
    let p = body.polytope()?;
    let v = intrinsic_volumes(p)?;
    let mut r = Report::default();
    r.result("dim", Value::from(p.dim()))
        .result("intrinsic_volumes", reals(&v.values))
        .result("volume", real(v.get(p.dim())));
    Ok(r)
}

fn steiner(ctx: &mut Context, args: &SteinerArgs) -> CliResult<Report> {
    let mut r = Report::default();
    if let Some(path) = &args.func {
        let alpha_path = args.alpha.as_ref().expect("clap requires alpha with func");
        let spec = FuncSpec::parse(&ctx.read(path)?)?;
        let input = match (&spec, spec.build()?) {
            (FuncSpec::Indicator { body }, _) => SteinerInput::Indicator(body.build()?.polytope()?.clone()),
            (_, Func::RadialQuadratic { dim, c }) => SteinerInput::RadialQuadratic { dim, c },
            _ => return Err(CliError::Validation("the functional fit takes indicator or radial_quadratic".into())),
        };
        let alpha = ctx.density(alpha_path)?;
        let n = input.dim();
        let nodes = args.nodes.clone().unwrap_or_else(|| (0..n + 3).map(|i| 0.25 * i as f64).collect());
        let fit = functional_intrinsic(&input, &alpha, &nodes)?;
        r.result("nodes", reals(&nodes))
            .result("components", reals(&fit.components))
            .result("coefficients", reals(&fit.coefficients))
            .result("values", reals(&fit.values))
            .residual("fit", fit.residual);
        return Ok(r);
    }
    let body = ctx.body(args.body.as_ref().expect("clap requires body or func"))?;
    let p = body.polytope()?;
    let ball = match p.dim() {
        2 => ball_polygon(args.ball_k, 1.0)?,
        n => ball_polytope(n, args.ball_k, 1.0)?,
    };
    let checks = args.radii.iter().map(|&t| steiner_check(p, t, &ball)).collect::<Result<Vec<_>, _>>()?;
    let col = |f: fn(&vallab_core::intrinsic::SteinerCheck) -> f64| checks.iter().map(f).collect::<Vec<f64>>();
    let worst = checks.iter().map(|c| c.residual() / c.bound().max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
    r.result("radii", reals(&args.radii))
        .result("steiner", reals(&col(|c| c.steiner)))
        .result("inner", reals(&col(|c| c.inner)))
        .result("outer", reals(&col(|c| c.outer)))
        .result("bracket_holds", Value::from(checks.iter().all(|c| c.holds())))
        .residual("max_residual_over_bound", worst);
    if !checks.iter().all(|c| c.holds()) {
        r.status = Some(Status::CheckFailed);
    }
    Ok(r)
}

fn decompose(ctx: &mut Context, args: &DecomposeArgs) -> CliResult<Report> {
    let spec = BodySpec::parse(&ctx.read(&args.simplex)?)?;
    let vertices = spec.ordered_vertices()?;
    let n = spec.dim();
    let volume = spec.build()?.polytope()?.volume()?;
    let (pieces, expected) = match (args.t, args.m) {
        (Some(t), _) => (canonical_simplex_decomposition(&vertices, t)?, volume),
        (_, Some(m)) => (cylinder_decomposition(&vertices, m)?, (m as f64).powi(n as i32) * volume),
        _ => unreachable!("clap requires t or m"),
    };
    let mut total = 0.0;
    let listed: Vec<Value> = pieces
        .iter()
        .map(|p| {
            let v = p.body.volume()?;
            total += p.multiplicity as f64 * v;
            Ok(object([
                ("label", Value::from(p.label.clone())),
                ("multiplicity", Value::from(p.multiplicity)),
                ("volume", real(v)),
                ("vertices", rows(&p.body.vertices().iter().map(|x| x.as_slice().to_vec()).collect::<Vec<_>>())),
            ]))
        })
        .collect::<CliResult<_>>()?;
    let mut r = Report::default();
    r.result("pieces", Value::Array(listed))
        .result("total_volume", real(total))
        .result("expected_volume", real(expected))
        .residual("volume", (total - expected).abs());
    Ok(r)
}

fn symbol_value(s: &DehnSymbol) -> Value {
    Value::Array(s.terms().iter().map(|t| object([("length", real(t.length)), ("angle", real(t.angle))])).collect())
}

fn verdict_into(r: &mut Report, v: &RelationVerdict, digits: u32) {
    r.result("verdict", v.kind.as_str().into())
        .result("height_bound", Value::from(v.height_bound))
        .result("digits", Value::from(digits));
    if let Some(c) = &v.certificate {
        let relations = c
            .relations
            .iter()
            .map(|rel| {
                object([
                    ("angle", real(rel.angle)),
                    ("pi", Value::from(rel.pi)),
                    ("basis", Value::from(rel.basis.clone())),
                    ("own", Value::from(rel.own)),
                    ("residual", real(rel.residual)),
                ])
            })
            .collect();
        r.result(
            "certificate",
            object([
                ("basis_angles", reals(&c.basis_angles)),
                ("certified", Value::from(c.certified.clone())),
                ("coefficients", reals(&c.coefficients)),
                ("relations", Value::Array(relations)),
            ]),
        );
    }
    if v.kind == VerdictKind::Unknown {
        r.status = Some(Status::Unknown);
    }
}

fn dehn(ctx: &mut Context, a: &Path, b: &Path, height: u64, digits: u32) -> CliResult<Report> {
    let (pa, pb) = (ctx.body(a)?, ctx.body(b)?);
    let (pa, pb) = (pa.polytope()?, pb.polytope()?);
    let (sa, sb) = (dehn_symbol(pa)?, dehn_symbol(pb)?);
    let v = symbol_equal(&sa, &sb, height, digits)?;
    let mut r = Report::default();
    r.result("symbol_a", symbol_value(&sa))
        .result("symbol_b", symbol_value(&sb))
        .result("volume_a", real(pa.volume()?))
        .result("volume_b", real(pb.volume()?));
    verdict_into(&mut r, &v, digits);
    Ok(r)
}

fn hilbert3(volume: f64, height: u64, digits: u32) -> CliResult<Report> {
    let tol = 1e-12 * volume.max(1.0);
    let h = hilbert3_report_with_volume(volume, tol, height, digits)?;
    let mut r = Report::default();
    r.result("cube_volume", real(h.cube_volume))
        .result("tetrahedron_volume", real(h.tetrahedron_volume))
        .result("cube_symbol", symbol_value(&h.cube_symbol))
        .result("tetrahedron_symbol", symbol_value(&h.tetrahedron_symbol))
        .residual("volume", (h.cube_volume - h.tetrahedron_volume).abs())
        .tolerance("volume", tol);
    verdict_into(&mut r, &h.verdict, digits);
    Ok(r)
}

fn affine_length(ctx: &mut Context, body: &Path, depth: u32, csv: Option<&Path>, nodes: usize) -> CliResult<Report> {
    let k = ctx.body(body)?.smooth()?;
    let trace = affine_length_subdivision(&k, depth)?;
    let triangles: Vec<u64> = (0..trace.levels.len()).map(|j| 4u64 << j).collect();
    let increase = trace.levels.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let mut r = Report::default();
    r.result("estimate", real(trace.estimate))
        .result("levels", reals(&trace.levels))
        .result("triangles", Value::from(triangles.clone()))
        .residual("monotonicity", increase.max(0.0));
    if let Ok(q) = affine_surface_area_smooth(&k, nodes) {
        r.result("quadrature", real(q)).residual("subdivision_vs_quadrature", (q - trace.estimate).abs());
    }
    if let Some(path) = csv {
        let mut text = String::from("level,triangles,estimate\n");
        for (j, (t, e)) in triangles.iter().zip(&trace.levels).enumerate() {
            let _ = writeln!(text, "{j},{t},{}", format_real(*e));
        }
        write_file(path, &text)?;
        r.result("csv", Value::from(path.display().to_string()));
    }
    Ok(r)
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn kinematic(
    ctx: &mut Context,
    k: &Path,
    l: &Path,
    samples: u64,
    window: Option<f64>,
    csv: Option<&Path>,
) -> CliResult<Report> {
    let (kb, lb) = (ctx.body(k)?, ctx.body(l)?);
    let (kp, lp) = (kb.polytope()?, lb.polytope()?);
    let seed = ctx.seed;
    let run = |n: u64| -> CliResult<KinematicEstimate> {
        Ok(match window {
            Some(w) => kinematic_integral_mc_window(kp, lp, n, seed, w)?,
            None => kinematic_integral_mc(kp, lp, n, seed)?,
        })
    };
    let est = run(samples)?;
    let mut r = Report::default();
    r.result("estimate", real(est.estimate))
        .result("stderr", real(est.stderr))
        .result("target", real(est.target))
        .result("hits", Value::from(est.hits))
        .result("samples", Value::from(est.samples))
        .result("window", real(est.window))
        .residual("absolute", (est.estimate - est.target).abs())
        .residual("relative", (est.estimate - est.target).abs() / est.target.abs())
        .residual("standard_errors", (est.estimate - est.target).abs() / est.stderr);
    if let Some(path) = csv {
        let mut text = String::from("samples,estimate,stderr,target\n");
        let mut n = samples.min(1000);
        while n < samples {
            let e = run(n)?;
            let _ =
                writeln!(text, "{n},{},{},{}", format_real(e.estimate), format_real(e.stderr), format_real(e.target));
            n *= 2;
        }
        let _ = writeln!(
            text,
            "{samples},{},{},{}",
            format_real(est.estimate),
            format_real(est.stderr),
            format_real(est.target)
        );
        write_file(path, &text)?;
        r.result("csv", Value::from(path.display().to_string()));
    }
    Ok(r)
}

fn valuation(name: ValuationName, zeta: Option<DensityFunc>) -> CliResult<FuncValuation> {
    Ok(match name {
        ValuationName::ExpMin => FuncValuation::exp_min(),
        ValuationName::ExpIntegral => FuncValuation::exp_integral(),
        ValuationName::Grad => {
            FuncValuation::gradient(zeta.ok_or_else(|| CliError::Validation("grad needs --zeta".into()))?)
        }
        ValuationName::ExpIntegralSquared => {
            FuncValuation::new("exp_integral_squared", FuncFlags::default(), |u| Ok(exp_integral(u)?.powi(2)))
        }
        ValuationName::MongeAmpere => {
            return Err(CliError::Validation("monge_ampere acts on max-affine functions, not on u".into()))
        }
    })
}

fn fval(ctx: &mut Context, args: &FvalArgs) -> CliResult<Report> {
    let func = ctx.func(&args.func)?;
    let zeta = args.zeta.as_deref().map(|p| ctx.density(p)).transpose()?;
    let mut r = Report::default();
    if args.valuation == ValuationName::MongeAmpere {
        let ma = monge_ampere(func.max_affine()?)?;
        let atoms =
            ma.atoms.iter().map(|(x, m)| object([("point", reals(x.as_slice())), ("mass", real(*m))])).collect();
        r.result("atoms", Value::Array(atoms)).result("total_mass", real(ma.total_mass()));
        if let Some(z) = &zeta {
            r.result("value", real(ma.integrate(z)?));
        }
        return Ok(r);
    }
    let u = func.polyhedral()?;
    let z = valuation(args.valuation, zeta)?;
    r.result("valuation", Value::from(z.name())).result("value", real(z.evaluate(Some(u))?));
    if let Ok(w) = u.coercivity_witness() {
        let n = u.dim() as i32;
        r.result("minimum", real(u.minimum()?)).result(
            "witness",
            object([
                ("a", real(w.a)),
                ("b", real(w.b)),
                ("integral_bound", real(kappa(u.dim()) * (-w.b).exp() * factorial(u.dim()) / w.a.powi(n))),
            ]),
        );
    }
    Ok(r)
}

fn decompose_fval(ctx: &mut Context, args: &FvalArgs) -> CliResult<Report> {
    let func = ctx.func(&args.func)?;
    let zeta = args.zeta.as_deref().map(|p| ctx.density(p)).transpose()?;
    let u = func.polyhedral()?;
    let z = valuation(args.valuation, zeta)?;
    let c = epi_homog_components(&z, u)?;
    let total: f64 = c.components.iter().sum();
    let zu = z.evaluate(Some(u))?;
    let mut r = Report::default();
    r.result("valuation", Value::from(z.name()))
        .result("components", reals(&c.components))
        .result("values", reals(&c.values))
        .result("polynomial", Value::from(c.polynomial))
        .result("value", real(zu))
        .residual("reconstruction", c.reconstruction_residual)
        .residual("sum_of_components", (total - zu).abs())
        .tolerance("reconstruction", 1e-6 * zu.abs().max(1.0));
    Ok(r)
}

/// `v*` for a random max-affine `v` with eight pieces in the plane.
fn random_function(rng: &mut ChaCha8Rng) -> CliResult<PolyhedralFunc> {
    loop {
        let pieces: Vec<(Vector, f64)> = (0..8)
            .map(|_| {
                let y = Vector::from_fn(2, |_, _| rng.gen_range(-2.0..2.0));
                (y, rng.gen_range(-1.0..1.0))
            })
            .collect();
        let v = MaxAffineFunc::new(pieces)?;
        if v.pieces().len() >= 3 {
            return Ok(conjugate_max_affine(&v)?);
        }
    }
}

fn check(
    ctx: &mut Context,
    name: ValuationName,
    pairs: PairKind,
    count: usize,
    zeta: Option<&Path>,
) -> CliResult<Report> {
    let zeta = match zeta {
        Some(p) => Some(ctx.density(p)?),
        None if name == ValuationName::Grad => Some(DensityFunc::hat(&Vector::zeros(2), 2.0, 1.0)?),
        None => None,
    };
    let z = valuation(name, zeta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let shifts = [-1.0, -0.5, 0.5, 1.0];
    let mut residuals = Vec::with_capacity(count);
    while residuals.len() < count {
        let u = random_function(&mut rng)?;
        match pairs {
            PairKind::Split => {
                let Domain::Body(body) = u.domain() else { unreachable!("conjugates have bounded domains") };
                let angle: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let normal = Vector::from_column_slice(&[angle.cos(), angle.sin()]);
                let offset = normal.dot(&body.centroid());
                let (Some(a), Some(b)) = split_pair(&u, &Hyperplane::new(normal, offset)?)? else { continue };
                residuals.push(function_valuation_check(&z, &a, &b)?);
            }
            PairKind::Shift => residuals.push(vertical_shift_check(&z, &u, &shifts)?),
        }
    }
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    let mut r = Report::default();
    r.result("valuation", Value::from(z.name()))
        .result("pairs", Value::from(count))
        .result(
            "kind",
            Value::from(match pairs {
                PairKind::Split => "split",
                PairKind::Shift => "shift",
            }),
        )
        .result("passed", Value::from(worst < CHECK_TOL))
        .residual("max", worst)
        .residual("mean", residuals.iter().sum::<f64>() / count.max(1) as f64)
        .tolerance("max", CHECK_TOL);
    if worst >= CHECK_TOL {
        r.status = Some(Status::CheckFailed);
    }
    Ok(r)
}
