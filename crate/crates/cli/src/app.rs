//! Subcommand definitions and dispatch.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use elastica_core::critical::{
    self, ElasticaParams, ModelKind, ModelParams, QuadraticModelParams, SolveOptions,
};
use elastica_core::energy::{self, EnergyDensity, ProbeOptions};
use elastica_core::frames::{
    self, ClosureMode, CurvatureTorsionProfile, FramedCurve, Interpolation,
};
use elastica_core::minimize::{self, DiscreteProblem};
use elastica_core::shooting::{self, RefineOptions, ReproduceOptions, SearchSpace};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{merge, required, resolve_seed, RangeArg};
use crate::error::{CliError, CliResult};
use crate::export::{export_curve, Plane};
use crate::record::RunRecord;

#[derive(Debug, Parser)]
#[command(
    name = "elastica",
    version,
    about = "Closed elasticae and critical framed curves"
)]
struct Cli {
    /// Worker threads for parallel stages (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate a curvature-torsion profile into a framed curve.
    Integrate(Cmd<IntegrateArgs>),
    /// Evaluate a density's energy on a profile.
    Energy(Cmd<EnergyArgs>),
    /// Solve one model's ODE and rebuild the curve.
    Solve(Cmd<SolveArgs>),
    /// Seeded random search for closed curves.
    Search(Cmd<SearchArgs>),
    /// Simplex refinement of the closure defect.
    Refine(Cmd<RefineArgs>),
    /// Direct minimization of the discrete energy.
    Minimize(Cmd<MinimizeArgs>),
    /// Density probes and solution certificates.
    Verify(Cmd<VerifyArgs>),
    /// Recompute one of the published parameter tables.
    Reproduce(Cmd<ReproduceArgs>),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct Cmd<A: Args> {
    /// JSON file with defaults for any flag; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    args: A,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
struct OutputArgs {
    /// Curve CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG next to the CSV.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    svg: Option<bool>,
    /// Projection plane for the SVG: xy, xz or yz.
    #[arg(long)]
    plane: Option<Plane>,
    /// Run-record JSON path.
    #[arg(long)]
    record: Option<PathBuf>,
}

impl OutputArgs {
    fn svg_plane(&self) -> Option<Plane> {
        self.svg
            .unwrap_or(false)
            .then(|| self.plane.unwrap_or_default())
    }

    fn resolved(&self) -> Value {
        json!({
            "out": self.out,
            "svg": self.svg.unwrap_or(false),
            "plane": self.plane.unwrap_or_default(),
            "record": self.record,
        })
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
struct ProfileArgs {
    /// CSV with `kappa` and `tau` columns (and `s`) on a uniform grid.
    #[arg(long)]
    profile: Option<PathBuf>,
    #[arg(long)]
    length: Option<f64>,
    #[arg(long)]
    intervals: Option<usize>,
    /// Constant curvature when no profile file is given.
    #[arg(long)]
    kappa: Option<f64>,
    /// Constant torsion when no profile file is given.
    #[arg(long)]
    tau: Option<f64>,
    /// piecewise_linear or piecewise_constant_midpoint.
    #[arg(long)]
    interpolation: Option<String>,
}

impl ProfileArgs {
    fn interpolation(&self) -> CliResult<Interpolation> {
        match self.interpolation.as_deref() {
            None | Some("piecewise_linear") => Ok(Interpolation::PiecewiseLinear),
            Some("piecewise_constant_midpoint") => Ok(Interpolation::PiecewiseConstantMidpoint),
            Some(other) => Err(CliError::Usage(format!("unknown interpolation `{other}`"))),
        }
    }

    fn build(&self) -> CliResult<CurvatureTorsionProfile> {
        let interpolation = self.interpolation()?;
        if let Some(path) = &self.profile {
            let (length, kappa, tau) = read_profile(path)?;
            return Ok(CurvatureTorsionProfile::new(
                length,
                kappa,
                tau,
                interpolation,
            )?);
        }
        let length = required(self.length, "length")?;
        let intervals = self.intervals.unwrap_or(4096);
        let kappa = required(self.kappa, "kappa")?;
        let tau = self.tau.unwrap_or(0.0);
        Ok(
            CurvatureTorsionProfile::constant(length, intervals, kappa, tau)?
                .with_interpolation(interpolation),
        )
    }

    fn resolved(&self) -> Value {
        json!({
            "profile": self.profile,
            "length": self.length,
            "intervals": self.profile.is_none().then(|| self.intervals.unwrap_or(4096)),
            "kappa": self.kappa,
            "tau": self.profile.is_none().then(|| self.tau.unwrap_or(0.0)),
            "interpolation": self.interpolation.clone().unwrap_or_else(|| "piecewise_linear".into()),
        })
    }
}

fn read_profile(path: &Path) -> CliResult<(f64, Vec<f64>, Vec<f64>)> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::io(path, e))?;
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Format(format!("{}: missing column `{name}`", path.display())))
    };
    let (is, ik, it) = (column("s")?, column("kappa")?, column("tau")?);
    let (mut s, mut kappa, mut tau) = (Vec::new(), Vec::new(), Vec::new());
    for record in reader.records() {
        let record = record?;
        let get = |i: usize| -> CliResult<f64> {
            record[i]
                .parse()
                .map_err(|_| CliError::Format(format!("bad number {:?}", &record[i])))
        };
        s.push(get(is)?);
        kappa.push(get(ik)?);
        tau.push(get(it)?);
    }
    if s.len() < 3 {
        return Err(
            elastica_core::Error::InvalidInput("a profile needs at least 3 rows".into()).into(),
        );
    }
    let length = s[s.len() - 1] - s[0];
    let h = length / (s.len() - 1) as f64;
    if s.windows(2)
        .any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1.0))
    {
        return Err(elastica_core::Error::InvalidInput(
            "profile nodes must be uniformly spaced".into(),
        )
        .into());
    }
    Ok((length, kappa, tau))
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
struct ModelArgs {
    /// planar, space or quadratic.
    #[arg(long)]
    model: Option<ModelKind>,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    /// Quadratic-model constant.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    k0: Option<f64>,
    #[arg(long)]
    k1: Option<f64>,
    #[arg(long)]
    t0: Option<f64>,
    #[arg(long)]
    t1: Option<f64>,
    #[arg(long)]
    t2: Option<f64>,
    #[arg(long)]
    length: Option<f64>,
    /// Integrator tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Output grid intervals.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    kappa_floor: Option<f64>,
}

impl ModelArgs {
    fn params(&self) -> CliResult<ModelParams> {
        let model = required(self.model, "model")?;
        let length = required(self.length, "length")?;
        Ok(match model {
            ModelKind::Planar => {
                if self.c2.is_some_and(|c2| c2 != 0.0) {
                    return Err(CliError::Usage("the planar model takes no --c2".into()));
                }
                ModelParams::Planar(ElasticaParams::planar(
                    required(self.c1, "c1")?,
                    required(self.k0, "k0")?,
                    required(self.k1, "k1")?,
                    length,
                ))
            }
            ModelKind::Space => ModelParams::Space(ElasticaParams {
                c1: required(self.c1, "c1")?,
                c2: required(self.c2, "c2")?,
                kappa0: required(self.k0, "k0")?,
                kappa1: required(self.k1, "k1")?,
                length,
            }),
            ModelKind::Quadratic => ModelParams::Quadratic(QuadraticModelParams {
                c: required(self.c, "c")?,
                kappa0: required(self.k0, "k0")?,
                kappa1: required(self.k1, "k1")?,
                tau0: required(self.t0, "t0")?,
                tau1: required(self.t1, "t1")?,
                tau2: required(self.t2, "t2")?,
                length,
            }),
        })
    }

    fn solve_options(&self) -> SolveOptions {
        let d = SolveOptions::default();
        SolveOptions {
            tol: self.tol.unwrap_or(d.tol),
            grid: self.grid.unwrap_or(d.grid),
            kappa_floor: self.kappa_floor.unwrap_or(d.kappa_floor),
            max_steps: d.max_steps,
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
struct IntegrateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    profile: ProfileArgs,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
struct EnergyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    profile: ProfileArgs,
    /// euler, quadratic, sadowsky, langer_singer or custom.
    #[arg(long)]
    density: Option<String>,
    /// Density parameters, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    density_params: Option<Vec<f64>>,
    #[arg(long)]
    record: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
struct SolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
struct SearchArgs {
    #[arg(long)]
    model: Option<ModelKind>,
    /// Range per constant as lo:hi, in model order; repeat the flag.
    #[arg(long = "range", allow_hyphen_values = true)]
    ranges: Option<Vec<RangeArg>>,
    /// Default ranges and lengths from a table's rows (±50% hull).
    #[arg(long)]
    table: Option<u8>,
    /// Candidate lengths, comma separated.
    #[arg(long, value_delimiter = ',')]
    lengths: Option<Vec<f64>>,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    grid: Option<usize>,
    /// Records kept in the run record.
    #[arg(long)]
    keep: Option<usize>,
    /// JSON file receiving every record.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    record: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
struct RefineArgs {
    #[command(flatten)]
    #[serde(flatten)]
    model: ModelArgs,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,
    /// Let the simplex move L as well.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    include_length: Option<bool>,
    /// Initial simplex scales tried in order, comma separated.
    #[arg(long, value_delimiter = ',')]
    scales: Option<Vec<f64>>,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
struct MinimizeArgs {
    #[arg(long)]
    density: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    density_params: Option<Vec<f64>>,
    #[arg(long)]
    length: Option<f64>,
    #[arg(long)]
    intervals: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Relative amplitude of the starting noise.
    #[arg(long)]
    noise: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    w_pos: Option<f64>,
    #[arg(long)]
    w_tan: Option<f64>,
    #[arg(long)]
    gradient_tolerance: Option<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
struct VerifyArgs {
    /// Density to probe (and to certify the solution against).
    #[arg(long)]
    density: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    density_params: Option<Vec<f64>>,
    /// Grid samples per axis.
    #[arg(long)]
    samples: Option<usize>,
    /// Random pairs for the convexity check.
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    #[serde(flatten)]
    model: ModelArgs,
    #[arg(long)]
    record: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
struct ReproduceArgs {
    /// Table number, 1 to 4.
    #[arg(long)]
    table: Option<u8>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Refine the closed rows (tables 1 and 3).
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    refine: Option<bool>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    svg: Option<bool>,
    #[arg(long)]
    plane: Option<Plane>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    grid: Option<usize>,
}

/// Parses `argv`, runs the subcommand and returns the process exit code:
/// 0 on success, 1 on domain or I/O errors, 2 on usage errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> CliResult<()> {
    configure_threads(cli.threads)?;
    let start = Instant::now();
    let (mut record, record_path) = match &cli.command {
        Command::Integrate(c) => integrate(&merge(&c.args, c.config.as_deref())?)?,
        Command::Energy(c) => energy_cmd(&merge(&c.args, c.config.as_deref())?)?,
        Command::Solve(c) => solve(&merge(&c.args, c.config.as_deref())?)?,
        Command::Search(c) => search(&merge(&c.args, c.config.as_deref())?)?,
        Command::Refine(c) => refine(&merge(&c.args, c.config.as_deref())?)?,
        Command::Minimize(c) => minimize_cmd(&merge(&c.args, c.config.as_deref())?)?,
        Command::Verify(c) => verify(&merge(&c.args, c.config.as_deref())?)?,
        Command::Reproduce(c) => reproduce(&merge(&c.args, c.config.as_deref())?)?,
    };
    record.duration_s = start.elapsed().as_secs_f64();
    if let Some(path) = &record_path {
        record.write(path)?;
    }
    print!("{}", record.to_json()?);
    if record.metrics.get("passed") == Some(&Value::Bool(false)) {
        return Err(CliError::Domain(elastica_core::Error::InvalidInput(
            "verification failed".into(),
        )));
    }
    Ok(())
}

#[cfg(feature = "parallel")]
fn configure_threads(threads: Option<usize>) -> CliResult<()> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        // A pool built earlier in the same process is kept.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(threads: Option<usize>) -> CliResult<()> {
    if threads == Some(0) {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    Ok(())
}

type Outcome = (RunRecord, Option<PathBuf>);

fn paths(written: &[PathBuf]) -> Vec<String> {
    written.iter().map(|p| p.display().to_string()).collect()
}

fn export(curve: &FramedCurve, output: &OutputArgs) -> CliResult<Vec<String>> {
    match &output.out {
        Some(path) => Ok(paths(&export_curve(curve, path, output.svg_plane())?)),
        None => Ok(Vec::new()),
    }
}

fn density_of(name: Option<&str>, params: Option<&[f64]>) -> CliResult<EnergyDensity> {
    let name = required(name, "density")?;
    Ok(EnergyDensity::from_name(name, params.unwrap_or(&[]))?)
}

fn closure_metrics(curve: &FramedCurve) -> CliResult<Value> {
    let mode = if curve.profile.is_planar() {
        ClosureMode::Planar
    } else {
        ClosureMode::Spatial
    };
    let report = frames::closure_defect(curve, mode)?;
    Ok(json!({
        "defect": report.defect,
        "position_gap": report.position_gap,
        "tangent_gap": report.tangent_gap,
        "max_orthonormality_error": curve.max_orthonormality_error(),
    }))
}

fn integrate(args: &IntegrateArgs) -> CliResult<Outcome> {
    let profile = args.profile.build()?;
    let curve = frames::integrate_canonical(&profile)?;
    let mut record = RunRecord::new(
        "integrate",
        json!({ "profile": args.profile.resolved(), "output": args.output.resolved() }),
    );
    record.metrics = closure_metrics(&curve)?;
    record.outputs = export(&curve, &args.output)?;
    Ok((record, args.output.record.clone()))
}

fn energy_cmd(args: &EnergyArgs) -> CliResult<Outcome> {
    let density = density_of(args.density.as_deref(), args.density_params.as_deref())?;
    let profile = args.profile.build()?;
    let mut record = RunRecord::new(
        "energy",
        json!({
            "profile": args.profile.resolved(),
            "density": density.name(),
            "density_params": args.density_params.clone().unwrap_or_default(),
        }),
    );
    record.metrics = json!({ "energy": energy::evaluate_energy(&density, &profile) });
    Ok((record, args.record.clone()))
}

fn solution_metrics(
    params: &ModelParams,
    opts: &SolveOptions,
) -> CliResult<(Value, Option<FramedCurve>)> {
    let eval = shooting::closure_objective(params, opts)?;
    let sol = &eval.solution;
    let curve = match eval.curve {
        Some(c) => Some(c),
        None if sol.nodes() >= 3 => Some(frames::integrate_canonical(&sol.profile()?)?),
        None => None,
    };
    let mut metrics = json!({
        "termination": eval.termination,
        "reached": sol.reached(),
        "defect": eval.defect,
        "min_abs_kappa": eval.min_abs_kappa,
    });
    match params.kind() {
        ModelKind::Quadratic => {
            if let Ok(q) = critical::quadratic_conservation(sol) {
                let c = sol.constant;
                let dev = q.iter().map(|v| (v - c).abs()).fold(0.0, f64::max);
                metrics["conservation_deviation"] = json!(dev);
            }
        }
        _ => {
            if let Ok(fi) = critical::elastica_first_integral(sol) {
                metrics["first_integral_deviation"] = json!(fi.max_deviation);
                metrics["first_integral_energy_drift"] = json!(fi.energy_drift);
            }
        }
    }
    Ok((metrics, curve))
}

fn solve(args: &SolveArgs) -> CliResult<Outcome> {
    let params = args.model.params()?;
    let opts = args.model.solve_options();
    let (metrics, curve) = solution_metrics(&params, &opts)?;
    let mut record = RunRecord::new(
        "solve",
        json!({ "params": params, "solve": opts, "output": args.output.resolved() }),
    );
    record.metrics = metrics;
    if let Some(curve) = &curve {
        record.outputs = export(curve, &args.output)?;
    }
    Ok((record, args.output.record.clone()))
}

fn search_space(args: &SearchArgs) -> CliResult<SearchSpace> {
    let model = required(args.model, "model")?;
    let mut space = match args.table {
        Some(table) => {
            let rows: Vec<ModelParams> = shooting::table_rows(table)?
                .into_iter()
                .map(|r| r.params)
                .filter(|p| p.kind() == model)
                .collect();
            if rows.is_empty() {
                return Err(CliError::Usage(format!(
                    "table {table} has no {model:?} rows"
                )));
            }
            SearchSpace::around_rows(model, &rows)
        }
        None => SearchSpace {
            model,
            ranges: Vec::new(),
            lengths: Vec::new(),
            threshold: 1e-6,
            budget: 1000,
            seed: 0,
            solve: SolveOptions::default(),
        },
    };
    if let Some(ranges) = &args.ranges {
        space.ranges = ranges.iter().map(|r| (r.0, r.1)).collect();
    }
    if let Some(lengths) = &args.lengths {
        space.lengths = lengths.clone();
    }
    if space.ranges.is_empty() {
        return Err(CliError::Usage(
            "give --range per constant or --table".into(),
        ));
    }
    if space.lengths.is_empty() {
        return Err(CliError::Usage("give --lengths or --table".into()));
    }
    space.threshold = args.threshold.unwrap_or(space.threshold);
    space.budget = args.budget.unwrap_or(space.budget);
    space.seed = resolve_seed(args.seed)?;
    space.solve.tol = args.tol.unwrap_or(space.solve.tol);
    space.solve.grid = args.grid.unwrap_or(space.solve.grid);
    Ok(space)
}

fn search(args: &SearchArgs) -> CliResult<Outcome> {
    let space = search_space(args)?;
    let keep = args.keep.unwrap_or(10);
    let records = shooting::random_search(&space)?;
    let mut record = RunRecord::new(
        "search",
        json!({ "space": space, "keep": keep, "out": args.out, "record": args.record }),
    );
    record.metrics = json!({
        "trials": records.len(),
        "accepted": records.iter().filter(|r| r.accepted).count(),
        "best_defect": records.first().map(|r| r.defect),
        "top": records.iter().take(keep).collect::<Vec<_>>(),
    });
    if let Some(path) = &args.out {
        let mut text = serde_json::to_string_pretty(&records)?;
        text.push('\n');
        crate::export::write_atomic(path, text.as_bytes())?;
        record.outputs.push(path.display().to_string());
    }
    Ok((record, args.record.clone()))
}

fn refine(args: &RefineArgs) -> CliResult<Outcome> {
    let start = args.model.params()?;
    let defaults = RefineOptions::default();
    let opts = RefineOptions {
        solve: args.model.solve_options(),
        threshold: args.threshold.unwrap_or(defaults.threshold),
        max_iterations: args.max_iterations.unwrap_or(defaults.max_iterations),
        include_length: args.include_length.unwrap_or(false),
        initial_scale: defaults.initial_scale,
    };
    let scales = args
        .scales
        .clone()
        .unwrap_or_else(|| shooting::DEFAULT_SCALES.to_vec());
    let outcome = shooting::refine_with_scales(&start, &opts, &scales)?;
    let mut record = RunRecord::new(
        "refine",
        json!({ "start": start, "refine": opts, "scales": scales, "output": args.output.resolved() }),
    );
    record.metrics = json!({
        "start_defect": outcome.start_defect,
        "defect": outcome.defect,
        "success": outcome.success,
        "iterations": outcome.iterations,
        "evaluations": outcome.evaluations,
        "params": outcome.params,
        "relative_change": shooting::relative_distance(&outcome.params, &start),
    });
    let eval = shooting::closure_objective(&outcome.params, &opts.solve)?;
    if let Some(curve) = &eval.curve {
        record.outputs = export(curve, &args.output)?;
    }
    Ok((record, args.output.record.clone()))
}

fn minimize_cmd(args: &MinimizeArgs) -> CliResult<Outcome> {
    let density = density_of(args.density.as_deref(), args.density_params.as_deref())?;
    let mut problem = DiscreteProblem::new(
        density,
        args.length.unwrap_or(2.0 * std::f64::consts::PI),
        args.intervals.unwrap_or(100),
    );
    problem.seed = resolve_seed(args.seed)?;
    problem.noise = args.noise.unwrap_or(problem.noise);
    problem.options.max_iterations = args
        .max_iterations
        .unwrap_or(problem.options.max_iterations);
    problem.options.gradient_tolerance = args
        .gradient_tolerance
        .unwrap_or(problem.options.gradient_tolerance);
    problem.penalty.w_pos = args.w_pos.unwrap_or(problem.penalty.w_pos);
    problem.penalty.w_tan = args.w_tan.unwrap_or(problem.penalty.w_tan);
    let result = minimize::minimize_energy(&problem)?;
    let mut record = RunRecord::new(
        "minimize",
        json!({
            "problem": problem,
            "density_params": args.density_params.clone().unwrap_or_default(),
            "output": args.output.resolved(),
        }),
    );
    record.metrics = json!({
        "energy": result.energy,
        "objective": result.objective,
        "position_gap": result.position_gap,
        "tangent_gap": result.tangent_gap,
        "closure_defect": result.closure_defect,
        "gradient_norm": result.gradient_norm,
        "iterations": result.iterations,
        "converged": result.converged,
    });
    let curve = minimize::result_curve(&problem, &result)?;
    record.outputs = export(&curve, &args.output)?;
    Ok((record, args.output.record.clone()))
}

fn verify(args: &VerifyArgs) -> CliResult<Outcome> {
    if args.density.is_none() && args.model.model.is_none() {
        return Err(CliError::Usage("give --density, --model, or both".into()));
    }
    let mut metrics = json!({});
    let mut passed = true;
    let mut probe_config = Value::Null;
    if let Some(name) = &args.density {
        let density = density_of(Some(name), args.density_params.as_deref())?;
        let d = ProbeOptions::default();
        let n = args.samples.unwrap_or(d.a_samples);
        let opts = ProbeOptions {
            a_samples: n,
            b_samples: n,
            convexity_pairs: args.pairs.unwrap_or(d.convexity_pairs),
            seed: resolve_seed(args.seed)?,
            ..d
        };
        let report = energy::probe_density(&density, &opts)?;
        let ok = report.coercivity.is_none_or(|v| v.count == 0)
            && report.upper_growth.count == 0
            && report.partial_growth.count == 0
            && report.max_partial_deviation <= 1e-6;
        passed &= ok;
        probe_config =
            json!({ "density": name, "density_params": args.density_params, "probe": opts });
        metrics["probe"] = json!({ "report": report, "passed": ok });
    }
    let mut model_config = Value::Null;
    if args.model.model.is_some() {
        let params = args.model.params()?;
        let opts = args.model.solve_options();
        let sol = critical::solve(&params, &opts)?;
        let mut cert =
            json!({ "termination": sol.termination, "min_abs_kappa": sol.min_abs_kappa() });
        if sol.termination.is_completed() {
            let density = match (&args.density, params.kind()) {
                (Some(name), _) => density_of(Some(name), args.density_params.as_deref())?,
                (None, ModelKind::Quadratic) => EnergyDensity::quadratic(),
                (None, _) => EnergyDensity::euler(),
            };
            let curve = frames::integrate_canonical(&sol.profile()?)?;
            if params.kind() != ModelKind::Quadratic {
                let fi = critical::elastica_first_integral(&sol)?;
                cert["first_integral_deviation"] = json!(fi.max_deviation);
                cert["first_integral_energy_drift"] = json!(fi.energy_drift);
            }
            if let Ok(w) = critical::multiplier_witness(&density, &sol, &curve) {
                cert["lambda_mean"] = json!(w.lambda_mean);
                cert["lambda_constancy_defect"] = json!(w.constancy_defect);
            }
            if let Ok(r) = critical::reg1_residual(&density, &sol) {
                cert["reg1_first_sup"] = json!(r.first_sup);
                cert["reg1_second_sup"] = json!(r.second_sup);
            }
        }
        model_config = json!({ "params": params, "solve": opts });
        metrics["certificate"] = cert;
    }
    metrics["passed"] = json!(passed);
    let mut record = RunRecord::new(
        "verify",
        json!({ "density": probe_config, "model": model_config }),
    );
    record.metrics = metrics;
    Ok((record, args.record.clone()))
}

fn reproduce(args: &ReproduceArgs) -> CliResult<Outcome> {
    let table = required(args.table, "table")?;
    let out_dir = args
        .out_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("runs"));
    let mut opts = ReproduceOptions::default();
    opts.solve.tol = args.tol.unwrap_or(opts.solve.tol);
    opts.solve.grid = args.grid.unwrap_or(opts.solve.grid);
    opts.refine = args.refine.unwrap_or(false);
    opts.refine_options.solve = opts.solve;
    let plane = args
        .svg
        .unwrap_or(false)
        .then(|| args.plane.unwrap_or_default());
    let report = shooting::reproduce_table(table, &opts)?;
    let mut outputs = Vec::new();
    let mut rows = Vec::new();
    for row in &report.rows {
        if let Some(curve) = &row.curve {
            let path = out_dir.join(format!("table{table}_{}.csv", row.label));
            outputs.extend(paths(&export_curve(curve, &path, plane)?));
        }
        rows.push(json!({
            "label": row.label,
            "params": row.params,
            "termination": row.termination,
            "reached": row.reached,
            "defect": row.defect,
            "min_abs_kappa": row.min_abs_kappa,
            "refined": row.refined,
        }));
    }
    let record_path = out_dir.join(format!("table{table}.json"));
    let mut record = RunRecord::new(
        "reproduce",
        json!({
            "table": table,
            "out_dir": out_dir,
            "options": opts,
            "svg": plane.is_some(),
            "plane": args.plane.unwrap_or_default(),
        }),
    );
    record.metrics = json!({ "rows": rows });
    outputs.push(record_path.display().to_string());
    record.outputs = outputs;
    Ok((record, Some(record_path)))
}
