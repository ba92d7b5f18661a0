//! Closure search over ODE constants: the closure objective, seeded random
//! search, simplex refinement, and reproduction of the published tables.

use std::cmp::Ordering;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::critical::{
    self, ElasticaParams, ModelKind, ModelParams, OdeSolution, QuadraticModelParams, SolveOptions,
    Termination,
};
use crate::error::{invalid, Result};
use crate::frames::{self, ClosureMode, ClosureReport, FramedCurve};
use crate::nelder_mead::{self, NelderMeadOptions};
use crate::parallel;

/// Outcome of one closure evaluation. `defect` is `+∞` when the solve did not
/// reach `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosureEvaluation {
    pub defect: f64,
    pub termination: Termination,
    pub report: Option<ClosureReport>,
    pub min_abs_kappa: f64,
    pub solution: OdeSolution,
    pub curve: Option<FramedCurve>,
}

/// Solves the model, rebuilds the curve from the origin with the identity
/// frame, and returns `d = |r(L)| + |t(L) − e₁|`.
pub fn closure_objective(params: &ModelParams, opts: &SolveOptions) -> Result<ClosureEvaluation> {
    let solution = critical::solve(params, opts)?;
    let min_abs_kappa = solution.min_abs_kappa();
    if !solution.termination.is_completed() {
        return Ok(ClosureEvaluation {
            defect: f64::INFINITY,
            termination: solution.termination,
            report: None,
            min_abs_kappa,
            solution,
            curve: None,
        });
    }
    let curve = frames::integrate_canonical(&solution.profile()?)?;
    let mode = if params.kind() == ModelKind::Planar {
        ClosureMode::Planar
    } else {
        ClosureMode::Spatial
    };
    let report = frames::closure_defect(&curve, mode)?;
    Ok(ClosureEvaluation {
        defect: report.defect,
        termination: solution.termination,
        report: Some(report),
        min_abs_kappa,
        solution,
        curve: Some(curve),
    })
}

/// Closure defect only; invalid parameters and failed solves map to `+∞`.
pub fn defect_of(params: &ModelParams, opts: &SolveOptions) -> f64 {
    closure_objective(params, opts).map_or(f64::INFINITY, |e| e.defect)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    pub model: ModelKind,
    /// Closed range per constant, in [`ModelParams::to_vector`] order.
    pub ranges: Vec<(f64, f64)>,
    /// Candidate lengths, cycled by trial index.
    pub lengths: Vec<f64>,
    pub threshold: f64,
    pub budget: usize,
    pub seed: u64,
    #[serde(default)]
    pub solve: SolveOptions,
}

impl SearchSpace {
    pub fn validate(&self) -> Result<()> {
        if self.ranges.len() != self.model.dimension() {
            return Err(invalid(format!(
                "{:?} search needs {} ranges, got {}",
                self.model,
                self.model.dimension(),
                self.ranges.len()
            )));
        }
        if self
            .ranges
            .iter()
            .any(|(lo, hi)| !(lo.is_finite() && hi.is_finite() && lo <= hi))
        {
            return Err(invalid("every range must be finite with lo <= hi"));
        }
        if self.lengths.is_empty() || self.lengths.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(invalid(
                "length candidates must be a nonempty list of positive values",
            ));
        }
        if !(self.threshold > 0.0) {
            return Err(invalid("threshold must be positive"));
        }
        Ok(())
    }

    /// Convex hull of the given rows, widened by 50% of each column's span
    /// (or of its magnitude for constant columns).
    pub fn around_rows(model: ModelKind, rows: &[ModelParams]) -> Self {
        let dim = model.dimension();
        let mut ranges = vec![(f64::INFINITY, f64::NEG_INFINITY); dim];
        let mut lengths = Vec::new();
        for r in rows {
            for (range, v) in ranges.iter_mut().zip(r.to_vector()) {
                range.0 = range.0.min(v);
                range.1 = range.1.max(v);
            }
            if !lengths.contains(&r.length()) {
                lengths.push(r.length());
            }
        }
        for range in &mut ranges {
            let pad = 0.5 * ((range.1 - range.0).max(range.0.abs().max(range.1.abs())));
            *range = (range.0 - pad, range.1 + pad);
        }
        SearchSpace {
            model,
            ranges,
            lengths,
            threshold: 1e-6,
            budget: 1000,
            seed: 0,
            solve: SolveOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub restart: usize,
    pub params: Vec<f64>,
    pub length: f64,
    pub defect: f64,
    /// `None` when the sampled constants were rejected before solving.
    pub termination: Option<Termination>,
    pub accepted: bool,
}

/// Generator for trial `index`: the seed picks the key, the index the stream.
pub fn trial_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn run_trial(space: &SearchSpace, index: usize) -> SearchRecord {
    let mut rng = trial_rng(space.seed, index);
    let params: Vec<f64> = space
        .ranges
        .iter()
        .map(|&(lo, hi)| if lo == hi { lo } else { rng.gen_range(lo..=hi) })
        .collect();
    let length = space.lengths[index % space.lengths.len()];
    let (defect, termination) = ModelParams::from_vector(space.model, &params, length)
        .and_then(|p| closure_objective(&p, &space.solve))
        .map_or((f64::INFINITY, None), |e| (e.defect, Some(e.termination)));
    let accepted = defect < space.threshold && termination.is_some_and(|t| t.is_completed());
    SearchRecord {
        restart: index,
        params,
        length,
        defect,
        termination,
        accepted,
    }
}

fn record_order(a: &SearchRecord, b: &SearchRecord) -> Ordering {
    a.defect
        .total_cmp(&b.defect)
        .then_with(|| {
            a.params
                .iter()
                .zip(&b.params)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
        .then_with(|| a.length.total_cmp(&b.length))
        .then_with(|| a.restart.cmp(&b.restart))
}

/// Uniform random trials, sorted by ascending defect. The result depends only
/// on `space`, whatever the thread count.
pub fn random_search(space: &SearchSpace) -> Result<Vec<SearchRecord>> {
    space.validate()?;
    let mut records = parallel::map_indexed(space.budget, |i| run_trial(space, i));
    records.sort_by(record_order);
    Ok(records)
}

/// Same as [`random_search`] but always on the calling thread.
pub fn random_search_serial(space: &SearchSpace) -> Result<Vec<SearchRecord>> {
    space.validate()?;
    let mut records = parallel::map_indexed_serial(space.budget, |i| run_trial(space, i));
    records.sort_by(record_order);
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefineOptions {
    pub solve: SolveOptions,
    pub threshold: f64,
    pub max_iterations: usize,
    /// Also move `L`.
    pub include_length: bool,
    /// Relative edge of the starting simplex.
    pub initial_scale: f64,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            solve: SolveOptions::default(),
            threshold: 1e-6,
            max_iterations: 2000,
            include_length: false,
            initial_scale: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefineOutcome {
    pub start: ModelParams,
    pub params: ModelParams,
    pub start_defect: f64,
    pub defect: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub success: bool,
}

/// Nelder–Mead on the closure defect from `start`.
pub fn refine(start: &ModelParams, opts: &RefineOptions) -> Result<RefineOutcome> {
    let start_eval = closure_objective(start, &opts.solve)?;
    if !start_eval.defect.is_finite() {
        return Err(invalid(format!(
            "refinement needs a finite starting defect (solve ended with {:?})",
            start_eval.termination
        )));
    }
    let kind = start.kind();
    let length = start.length();
    let mut x0 = start.to_vector();
    if opts.include_length {
        x0.push(length);
    }
    let decode = |x: &[f64]| -> Result<ModelParams> {
        if opts.include_length {
            let (consts, l) = x.split_at(kind.dimension());
            ModelParams::from_vector(kind, consts, l[0])
        } else {
            ModelParams::from_vector(kind, x, length)
        }
    };
    let nm = NelderMeadOptions {
        max_iterations: opts.max_iterations,
        target: opts.threshold,
        initial_scale: opts.initial_scale,
        ..Default::default()
    };
    let result = nelder_mead::minimize(
        |x| decode(x).map_or(f64::INFINITY, |p| defect_of(&p, &opts.solve)),
        &x0,
        &nm,
    );
    let (params, defect) = if result.value <= start_eval.defect {
        (decode(&result.best)?, result.value)
    } else {
        (*start, start_eval.defect)
    };
    Ok(RefineOutcome {
        start: *start,
        params,
        start_defect: start_eval.defect,
        defect,
        iterations: result.iterations,
        evaluations: result.evaluations,
        success: defect < opts.threshold,
    })
}

/// Runs [`refine`] once per simplex scale, stopping at the first success,
/// and keeps the lowest defect seen.
pub fn refine_with_scales(
    start: &ModelParams,
    opts: &RefineOptions,
    scales: &[f64],
) -> Result<RefineOutcome> {
    let mut best: Option<RefineOutcome> = None;
    for &initial_scale in scales {
        let outcome = refine(
            start,
            &RefineOptions {
                initial_scale,
                ..*opts
            },
        )?;
        let done = outcome.success;
        if best.as_ref().is_none_or(|b| outcome.defect < b.defect) {
            best = Some(outcome);
        }
        if done {
            break;
        }
    }
    best.ok_or_else(|| invalid("at least one simplex scale is required"))
}

/// Scales tried by table reproduction.
pub const DEFAULT_SCALES: [f64; 4] = [0.01, 0.1, 0.2, 0.05];

/// One published parameter row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub label: &'static str,
    pub params: ModelParams,
}

fn planar_row(label: &'static str, c1: f64, k0: f64, k1: f64, length: f64) -> TableRow {
    TableRow {
        label,
        params: ModelParams::Planar(ElasticaParams::planar(c1, k0, k1, length)),
    }
}

fn space_row(label: &'static str, c1: f64, c2: f64, k0: f64, k1: f64, length: f64) -> TableRow {
    TableRow {
        label,
        params: ModelParams::Space(ElasticaParams {
            c1,
            c2,
            kappa0: k0,
            kappa1: k1,
            length,
        }),
    }
}

#[allow(clippy::too_many_arguments)]
fn quadratic_row(
    label: &'static str,
    c: f64,
    k0: f64,
    k1: f64,
    t0: f64,
    t1: f64,
    t2: f64,
    length: f64,
) -> TableRow {
    TableRow {
        label,
        params: ModelParams::Quadratic(QuadraticModelParams {
            c,
            kappa0: k0,
            kappa1: k1,
            tau0: t0,
            tau1: t1,
            tau2: t2,
            length,
        }),
    }
}

/// Rows of tables 1–4: closed planar elasticae, free planar elasticae,
/// closed space elasticae, and critical curves of `(κ² + τ²)/2`.
pub fn table_rows(table: u8) -> Result<Vec<TableRow>> {
    Ok(match table {
        1 => vec![
            planar_row("circumference", 1.00824, 1.01227, 0.0003, 2.0 * PI),
            planar_row("lemniscate", 0.07911031, 0.0442, 0.046801, 12.0 * PI),
        ],
        2 => vec![
            planar_row("fig6", 0.08, 0.25, 0.0, 22.0 * PI),
            planar_row("fig5", 0.08, 0.06, 0.0, 21.0 * PI),
            planar_row("fig1", 0.5, 0.0, 0.001, 8.0 * PI),
            planar_row("fig2", 2f64.sqrt(), 0.0, 0.5, 8.0 * PI),
            planar_row("fig4", 1.0, 1.0, -1.0, 8.0 * PI),
            planar_row("fig8", 0.3, 0.91, 1.43, 8.0 * PI),
        ],
        3 => vec![
            space_row("fig4a", 1.25316, 3.92702, 1.58313, 0.528316, 16.0 * PI),
            space_row("fig4b", 0.08, 5.06, 2.53458, 4.04, 3.0 * PI),
            space_row("fig4c", 2.06465, 4.38778, 1.51781, 1.47094, 16.0 * PI),
            space_row("fig4d", 1.62767, 4.08942, 2.85503, 0.669953, 30.0 * PI),
        ],
        4 => vec![
            quadratic_row(
                "fig7a",
                -0.1,
                0.787616,
                3.33006,
                1.00144,
                4.69347,
                4.29121,
                0.929236143,
            ),
            quadratic_row(
                "fig7b",
                0.01,
                3.05775,
                4.22982,
                0.749952,
                0.997559,
                3.02353,
                0.8734864103,
            ),
            quadratic_row(
                "fig7c",
                1.03,
                1.95093,
                1.6048,
                8.21105,
                0.508862,
                3.25462,
                1.0579039889,
            ),
        ],
        other => return Err(invalid(format!("tables are numbered 1 to 4, got {other}"))),
    })
}

/// Tables whose rows are meant to be closed curves.
pub fn table_is_closed(table: u8) -> bool {
    matches!(table, 1 | 3)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct ReproduceOptions {
    pub solve: SolveOptions,
    /// Refine closed rows after the direct solve.
    pub refine: bool,
    pub refine_options: RefineOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowReport {
    pub label: String,
    pub params: ModelParams,
    pub termination: Termination,
    pub defect: f64,
    pub min_abs_kappa: f64,
    pub reached: f64,
    pub refined: Option<RefineOutcome>,
    #[serde(skip)]
    pub curve: Option<FramedCurve>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub table: u8,
    pub rows: Vec<RowReport>,
}

/// Runs every row of `table` through its solver and the curve
/// reconstruction. Rows that stop early are reported, not raised.
pub fn reproduce_table(table: u8, opts: &ReproduceOptions) -> Result<TableReport> {
    let rows = table_rows(table)?;
    let reports = parallel::map_slice(&rows, |row| reproduce_row(table, row, opts));
    Ok(TableReport {
        table,
        rows: reports.into_iter().collect::<Result<Vec<_>>>()?,
    })
}

fn reproduce_row(table: u8, row: &TableRow, opts: &ReproduceOptions) -> Result<RowReport> {
    let eval = closure_objective(&row.params, &opts.solve)?;
    let curve = match eval.curve {
        Some(c) => Some(c),
        None if eval.solution.nodes() >= 3 => {
            Some(frames::integrate_canonical(&eval.solution.profile()?)?)
        }
        None => None,
    };
    let refined = if opts.refine && table_is_closed(table) && eval.defect.is_finite() {
        Some(refine_with_scales(
            &row.params,
            &opts.refine_options,
            &DEFAULT_SCALES,
        )?)
    } else {
        None
    };
    Ok(RowReport {
        label: row.label.to_string(),
        params: row.params,
        termination: eval.termination,
        defect: eval.defect,
        min_abs_kappa: eval.min_abs_kappa,
        reached: eval.solution.reached(),
        refined,
        curve,
    })
}

/// Relative distance `‖p − q‖ / ‖q‖` between constant vectors.
pub fn relative_distance(p: &ModelParams, q: &ModelParams) -> f64 {
    let (a, b) = (p.to_vector(), q.to_vector());
    let diff: f64 = a
        .iter()
        .zip(&b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt();
    let norm: f64 = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    diff / norm
}
