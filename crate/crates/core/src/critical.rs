//! Critical-point systems as initial-value problems, and the certificates
//! used to check their solutions: the elastica first integral, the
//! reconstructed Lagrange multipliers `(μ, λ)`, and the multiplier-free
//! residual system.

use serde::{Deserialize, Serialize};

use crate::energy::EnergyDensity;
use crate::error::{invalid, Error, Result};
use crate::frames::{CurvatureTorsionProfile, FramedCurve, Interpolation, Vec3};
use crate::ode::{self, OdeOptions, Stop};
use crate::quadrature;

/// Constants of the elastica equations
/// `2κ'' − 2κτ² + κ³ − c₁κ = 0`, `κ²τ = c₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElasticaParams {
    pub c1: f64,
    pub c2: f64,
    pub kappa0: f64,
    pub kappa1: f64,
    pub length: f64,
}

impl ElasticaParams {
    pub fn planar(c1: f64, kappa0: f64, kappa1: f64, length: f64) -> Self {
        ElasticaParams {
            c1,
            c2: 0.0,
            kappa0,
            kappa1,
            length,
        }
    }

    fn validate(&self) -> Result<()> {
        let vals = [self.c1, self.c2, self.kappa0, self.kappa1, self.length];
        if !vals.iter().all(|v| v.is_finite()) {
            return Err(invalid("elastica constants must be finite"));
        }
        if !(self.length > 0.0) {
            return Err(invalid(format!(
                "length must be positive, got {}",
                self.length
            )));
        }
        Ok(())
    }
}

/// Constants of the reduced system for the density `(κ² + τ²)/2`; `tau1` and
/// `tau2` are `τ'(0)` and `τ''(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticModelParams {
    pub c: f64,
    pub kappa0: f64,
    pub kappa1: f64,
    pub tau0: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub length: f64,
}

impl QuadraticModelParams {
    fn validate(&self) -> Result<()> {
        let vals = [
            self.c,
            self.kappa0,
            self.kappa1,
            self.tau0,
            self.tau1,
            self.tau2,
            self.length,
        ];
        if !vals.iter().all(|v| v.is_finite()) {
            return Err(invalid("model constants must be finite"));
        }
        if !(self.length > 0.0) {
            return Err(invalid(format!(
                "length must be positive, got {}",
                self.length
            )));
        }
        if self.kappa0 == 0.0 {
            return Err(invalid(
                "initial curvature must be nonzero (the system divides by κ)",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Planar,
    Space,
    Quadratic,
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "planar" => Ok(ModelKind::Planar),
            "space" => Ok(ModelKind::Space),
            "quadratic" => Ok(ModelKind::Quadratic),
            other => Err(invalid(format!("unknown model `{other}`"))),
        }
    }
}

/// Either parameter family, tagged by model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum ModelParams {
    Planar(ElasticaParams),
    Space(ElasticaParams),
    Quadratic(QuadraticModelParams),
}

impl ModelParams {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::Planar(_) => ModelKind::Planar,
            ModelParams::Space(_) => ModelKind::Space,
            ModelParams::Quadratic(_) => ModelKind::Quadratic,
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            ModelParams::Planar(p) | ModelParams::Space(p) => p.length,
            ModelParams::Quadratic(q) => q.length,
        }
    }

    pub fn with_length(mut self, length: f64) -> Self {
        match &mut self {
            ModelParams::Planar(p) | ModelParams::Space(p) => p.length = length,
            ModelParams::Quadratic(q) => q.length = length,
        }
        self
    }

    /// Free constants in a fixed order: `(c₁, κ₀, κ₁)` planar,
    /// `(c₁, c₂, κ₀, κ₁)` space, `(c, κ₀, κ₁, τ₀, τ₁, τ₂)` quadratic.
    pub fn to_vector(&self) -> Vec<f64> {
        match self {
            ModelParams::Planar(p) => vec![p.c1, p.kappa0, p.kappa1],
            ModelParams::Space(p) => vec![p.c1, p.c2, p.kappa0, p.kappa1],
            ModelParams::Quadratic(q) => vec![q.c, q.kappa0, q.kappa1, q.tau0, q.tau1, q.tau2],
        }
    }

    pub fn from_vector(kind: ModelKind, v: &[f64], length: f64) -> Result<Self> {
        let want = kind.dimension();
        if v.len() != want {
            return Err(invalid(format!(
                "{kind:?} model takes {want} constants, got {}",
                v.len()
            )));
        }
        Ok(match kind {
            ModelKind::Planar => {
                ModelParams::Planar(ElasticaParams::planar(v[0], v[1], v[2], length))
            }
            ModelKind::Space => ModelParams::Space(ElasticaParams {
                c1: v[0],
                c2: v[1],
                kappa0: v[2],
                kappa1: v[3],
                length,
            }),
            ModelKind::Quadratic => ModelParams::Quadratic(QuadraticModelParams {
                c: v[0],
                kappa0: v[1],
                kappa1: v[2],
                tau0: v[3],
                tau1: v[4],
                tau2: v[5],
                length,
            }),
        })
    }
}

impl ModelKind {
    pub fn dimension(self) -> usize {
        match self {
            ModelKind::Planar => 3,
            ModelKind::Space => 4,
            ModelKind::Quadratic => 6,
        }
    }

    pub fn parameter_names(self) -> &'static [&'static str] {
        match self {
            ModelKind::Planar => &["c1", "k0", "k1"],
            ModelKind::Space => &["c1", "c2", "k0", "k1"],
            ModelKind::Quadratic => &["c", "k0", "k1", "t0", "t1", "t2"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Absolute and relative local tolerance of the adaptive integrator.
    pub tol: f64,
    /// Output grid intervals over `[0, L]`.
    pub grid: usize,
    pub kappa_floor: f64,
    pub max_steps: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-12,
            grid: 4096,
            kappa_floor: 1e-8,
            max_steps: 5_000_000,
        }
    }
}

impl SolveOptions {
    fn ode(&self) -> OdeOptions {
        OdeOptions {
            max_steps: self.max_steps,
            ..OdeOptions::with_tol(self.tol)
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.grid < 2 || !(self.kappa_floor >= 0.0) {
            return Err(invalid(
                "solve options need tol > 0, grid >= 2, kappa_floor >= 0",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Termination {
    Completed,
    CurvatureVanished { s: f64 },
    NonFinite { s: f64 },
    StepLimit { s: f64 },
}

impl Termination {
    pub fn is_completed(&self) -> bool {
        matches!(self, Termination::Completed)
    }
}

/// Curvature, torsion and their first two derivatives on the output grid.
/// Second derivatives come from the ODE right-hand side (or closed forms),
/// never from differencing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OdeSolution {
    pub model: ModelKind,
    pub length: f64,
    pub s: Vec<f64>,
    pub kappa: Vec<f64>,
    pub dkappa: Vec<f64>,
    pub ddkappa: Vec<f64>,
    pub tau: Vec<f64>,
    pub dtau: Vec<f64>,
    pub ddtau: Vec<f64>,
    /// `u = τ'/κ` and `u'`, quadratic model only.
    pub u: Option<Vec<f64>>,
    pub du: Option<Vec<f64>>,
    pub termination: Termination,
    /// `c₁` (elastica) or `c` (quadratic model).
    pub constant: f64,
    /// `c₂` for elastica models.
    pub c2: f64,
    pub kappa_floor: f64,
}

impl OdeSolution {
    /// Wraps given series (for instance a closed-form test profile) so it can
    /// be checked by the certificates below.
    #[allow(clippy::too_many_arguments)]
    pub fn from_series(
        model: ModelKind,
        s: Vec<f64>,
        kappa: Vec<f64>,
        dkappa: Vec<f64>,
        ddkappa: Vec<f64>,
        tau: Vec<f64>,
        dtau: Vec<f64>,
        ddtau: Vec<f64>,
        constant: f64,
    ) -> Result<Self> {
        let n = s.len();
        if n < 3 {
            return Err(invalid("series need at least 3 nodes"));
        }
        if [&kappa, &dkappa, &ddkappa, &tau, &dtau, &ddtau]
            .iter()
            .any(|v| v.len() != n)
        {
            return Err(invalid("series lengths must agree with the grid"));
        }
        Ok(OdeSolution {
            model,
            length: s[n - 1] - s[0],
            s,
            kappa,
            dkappa,
            ddkappa,
            tau,
            dtau,
            ddtau,
            u: None,
            du: None,
            termination: Termination::Completed,
            constant,
            c2: 0.0,
            kappa_floor: SolveOptions::default().kappa_floor,
        })
    }

    pub fn nodes(&self) -> usize {
        self.s.len()
    }

    /// Arclength actually covered by the stored grid.
    pub fn reached(&self) -> f64 {
        self.s[self.s.len() - 1] - self.s[0]
    }

    pub fn min_abs_kappa(&self) -> f64 {
        self.kappa
            .iter()
            .map(|k| k.abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// Curvature/torsion profile over the covered part of the grid.
    pub fn profile(&self) -> Result<CurvatureTorsionProfile> {
        CurvatureTorsionProfile::new(
            self.reached(),
            self.kappa.clone(),
            self.tau.clone(),
            Interpolation::PiecewiseLinear,
        )
    }

    fn require_floor(&self) -> Result<()> {
        if let Termination::CurvatureVanished { s } = self.termination {
            return Err(Error::CurvatureFloor {
                s,
                floor: self.kappa_floor,
            });
        }
        if let Some(i) = self.kappa.iter().position(|k| k.abs() < self.kappa_floor) {
            return Err(Error::CurvatureFloor {
                s: self.s[i],
                floor: self.kappa_floor,
            });
        }
        Ok(())
    }
}

fn termination_from(stop: Stop) -> Termination {
    match stop {
        Stop::Completed => Termination::Completed,
        Stop::Event { s } => Termination::CurvatureVanished { s },
        Stop::NonFinite { s } => Termination::NonFinite { s },
        Stop::StepLimit { s } => Termination::StepLimit { s },
    }
}

/// Integrates `2κ'' + κ³ − c₁κ = 0` (the planar equation divided by κ³, which
/// stays regular where κ vanishes).
pub fn solve_planar_elastica(params: &ElasticaParams, opts: &SolveOptions) -> Result<OdeSolution> {
    params.validate()?;
    opts.validate()?;
    if params.c2 != 0.0 {
        return Err(invalid("planar elastica requires c2 = 0"));
    }
    solve_elastica(params, opts, ModelKind::Planar)
}

/// Integrates `2κ'' − 2c₂²/κ³ + κ³ − c₁κ = 0` with `τ = c₂/κ²`. Stops at the
/// curvature floor when `c₂ ≠ 0`.
pub fn solve_space_elastica(params: &ElasticaParams, opts: &SolveOptions) -> Result<OdeSolution> {
    params.validate()?;
    opts.validate()?;
    if params.c2 != 0.0 && params.kappa0.abs() < opts.kappa_floor.max(f64::MIN_POSITIVE) {
        return Err(invalid(
            "space elastica with c2 != 0 needs nonzero initial curvature",
        ));
    }
    solve_elastica(params, opts, ModelKind::Space)
}

fn elastica_rhs(c1: f64, c2: f64) -> impl Fn(f64, &[f64; 2]) -> [f64; 2] {
    move |_, y: &[f64; 2]| {
        let k = y[0];
        let twist = if c2 == 0.0 {
            0.0
        } else {
            2.0 * c2 * c2 / (k * k * k)
        };
        [y[1], 0.5 * (twist - k * k * k + c1 * k)]
    }
}

fn solve_elastica(
    p: &ElasticaParams,
    opts: &SolveOptions,
    model: ModelKind,
) -> Result<OdeSolution> {
    let grid = ode::uniform_grid(0.0, p.length, opts.grid);
    let rhs = elastica_rhs(p.c1, p.c2);
    let sign = p.kappa0.signum();
    let floor = opts.kappa_floor;
    let traj = if p.c2 != 0.0 {
        ode::integrate(
            &rhs,
            [p.kappa0, p.kappa1],
            &grid,
            &opts.ode(),
            Some(|_: f64, y: &[f64; 2]| sign * y[0] - floor),
        )?
    } else {
        ode::integrate(
            &rhs,
            [p.kappa0, p.kappa1],
            &grid,
            &opts.ode(),
            None::<fn(f64, &[f64; 2]) -> f64>,
        )?
    };
    let n = traj.grid.len();
    let mut sol = OdeSolution {
        model,
        length: p.length,
        s: traj.grid.clone(),
        kappa: Vec::with_capacity(n),
        dkappa: Vec::with_capacity(n),
        ddkappa: Vec::with_capacity(n),
        tau: Vec::with_capacity(n),
        dtau: Vec::with_capacity(n),
        ddtau: Vec::with_capacity(n),
        u: None,
        du: None,
        termination: termination_from(traj.stop),
        constant: p.c1,
        c2: p.c2,
        kappa_floor: floor,
    };
    for (s, y) in traj.grid.iter().zip(&traj.states) {
        let (k, dk) = (y[0], y[1]);
        let ddk = rhs(*s, y)[1];
        sol.kappa.push(k);
        sol.dkappa.push(dk);
        sol.ddkappa.push(ddk);
        if p.c2 == 0.0 {
            sol.tau.push(0.0);
            sol.dtau.push(0.0);
            sol.ddtau.push(0.0);
        } else {
            let k2 = k * k;
            sol.tau.push(p.c2 / k2);
            sol.dtau.push(-2.0 * p.c2 * dk / (k2 * k));
            sol.ddtau
                .push(-2.0 * p.c2 * (ddk * k - 3.0 * dk * dk) / (k2 * k2));
        }
    }
    Ok(sol)
}

/// Right-hand side of the reduced quadratic-model system in the state
/// `(κ, κ', τ, u, u')` with `u = τ'/κ`.
fn quadratic_rhs(c: f64) -> impl Fn(f64, &[f64; 5]) -> [f64; 5] {
    move |_, y: &[f64; 5]| {
        let [k, dk, t, u, du] = *y;
        [
            dk,
            k * (c - 0.5 * (k * k + t * t)) - 2.0 * t * du - k * u * u,
            k * u,
            du,
            t * dk + t * t * u,
        ]
    }
}

pub fn solve_quadratic_model(
    params: &QuadraticModelParams,
    opts: &SolveOptions,
) -> Result<OdeSolution> {
    params.validate()?;
    opts.validate()?;
    let p = params;
    let grid = ode::uniform_grid(0.0, p.length, opts.grid);
    let rhs = quadratic_rhs(p.c);
    let u0 = p.tau1 / p.kappa0;
    let du0 = (p.tau2 * p.kappa0 - p.tau1 * p.kappa1) / (p.kappa0 * p.kappa0);
    let sign = p.kappa0.signum();
    let floor = opts.kappa_floor;
    let traj = ode::integrate(
        &rhs,
        [p.kappa0, p.kappa1, p.tau0, u0, du0],
        &grid,
        &opts.ode(),
        Some(|_: f64, y: &[f64; 5]| sign * y[0] - floor),
    )?;
    let n = traj.grid.len();
    let mut sol = OdeSolution {
        model: ModelKind::Quadratic,
        length: p.length,
        s: traj.grid.clone(),
        kappa: Vec::with_capacity(n),
        dkappa: Vec::with_capacity(n),
        ddkappa: Vec::with_capacity(n),
        tau: Vec::with_capacity(n),
        dtau: Vec::with_capacity(n),
        ddtau: Vec::with_capacity(n),
        u: Some(Vec::with_capacity(n)),
        du: Some(Vec::with_capacity(n)),
        termination: termination_from(traj.stop),
        constant: p.c,
        c2: 0.0,
        kappa_floor: floor,
    };
    for (s, y) in traj.grid.iter().zip(&traj.states) {
        let d = rhs(*s, y);
        let [k, dk, t, u, du] = *y;
        sol.kappa.push(k);
        sol.dkappa.push(dk);
        sol.ddkappa.push(d[1]);
        sol.tau.push(t);
        sol.dtau.push(k * u);
        sol.ddtau.push(dk * u + k * du);
        sol.u.as_mut().unwrap().push(u);
        sol.du.as_mut().unwrap().push(du);
    }
    Ok(sol)
}

/// Dispatches on the parameter family.
pub fn solve(params: &ModelParams, opts: &SolveOptions) -> Result<OdeSolution> {
    match params {
        ModelParams::Planar(p) => solve_planar_elastica(p, opts),
        ModelParams::Space(p) => solve_space_elastica(p, opts),
        ModelParams::Quadratic(q) => solve_quadratic_model(q, opts),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirstIntegralReport {
    /// `I = 2κ''/κ − 2τ² + κ²` at each node.
    pub invariant: Vec<f64>,
    /// `sup |I(s) − I(0)|`.
    pub max_deviation: f64,
    /// `H = κ'² + c₂²/κ² + κ⁴/4 − c₁κ²/2`, conserved along exact solutions
    /// and sensitive to integration error.
    pub energy: Vec<f64>,
    /// `sup |H(s) − H(0)|`.
    pub energy_drift: f64,
}

/// Evaluates the elastica first integral along a solution, with κ'' taken
/// from the ODE. For planar solutions, nodes where `|κ|` is below the floor use
/// the removable limit `2κ''/κ = c₁ − κ²`.
pub fn elastica_first_integral(sol: &OdeSolution) -> Result<FirstIntegralReport> {
    if sol.model == ModelKind::Quadratic {
        return Err(invalid("first integral applies to elastica solutions"));
    }
    let planar = sol.c2 == 0.0;
    if !planar {
        sol.require_floor()?;
    }
    let (c1, c2) = (sol.constant, sol.c2);
    let invariant: Vec<f64> = (0..sol.nodes())
        .map(|i| {
            let (k, t) = (sol.kappa[i], sol.tau[i]);
            let ratio = if planar && k.abs() < sol.kappa_floor.max(f64::MIN_POSITIVE) {
                c1 - k * k
            } else {
                2.0 * sol.ddkappa[i] / k
            };
            ratio - 2.0 * t * t + k * k
        })
        .collect();
    let energy: Vec<f64> = (0..sol.nodes())
        .map(|i| {
            let (k, dk) = (sol.kappa[i], sol.dkappa[i]);
            let twist = if planar { 0.0 } else { c2 * c2 / (k * k) };
            dk * dk + twist + 0.25 * k.powi(4) - 0.5 * c1 * k * k
        })
        .collect();
    let sup_dev = |v: &[f64]| v.iter().map(|x| (x - v[0]).abs()).fold(0.0, f64::max);
    Ok(FirstIntegralReport {
        max_deviation: sup_dev(&invariant),
        energy_drift: sup_dev(&energy),
        invariant,
        energy,
    })
}

/// Derivatives of `f_a` and `f_b` along a solution, by the chain rule.
struct PartialsAlong {
    fa: Vec<f64>,
    fb: Vec<f64>,
    dfa: Vec<f64>,
    dfb: Vec<f64>,
    ddfa: Vec<f64>,
    ddfb: Vec<f64>,
}

fn partials_along(density: &EnergyDensity, sol: &OdeSolution) -> PartialsAlong {
    let n = sol.nodes();
    let mut out = PartialsAlong {
        fa: Vec::with_capacity(n),
        fb: Vec::with_capacity(n),
        dfa: Vec::with_capacity(n),
        dfb: Vec::with_capacity(n),
        ddfa: Vec::with_capacity(n),
        ddfb: Vec::with_capacity(n),
    };
    for i in 0..n {
        let j = density.jet(sol.s[i], sol.kappa[i], sol.tau[i]);
        let (dk, dt) = (sol.dkappa[i], sol.dtau[i]);
        let (ddk, ddt) = (sol.ddkappa[i], sol.ddtau[i]);
        out.fa.push(j.fa);
        out.fb.push(j.fb);
        out.dfa.push(j.faa * dk + j.fab * dt);
        out.dfb.push(j.fab * dk + j.fbb * dt);
        out.ddfa.push(
            (j.faaa * dk + j.faab * dt) * dk
                + j.faa * ddk
                + (j.faab * dk + j.fabb * dt) * dt
                + j.fab * ddt,
        );
        out.ddfb.push(
            (j.faab * dk + j.fabb * dt) * dk
                + j.fab * ddk
                + (j.fabb * dk + j.fbbb * dt) * dt
                + j.fbb * ddt,
        );
    }
    out
}

/// Reconstructed multipliers along a solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierWitness {
    pub mu: Vec<f64>,
    pub dmu: Vec<f64>,
    /// `λ(s)` in world coordinates, `[x, y, z]` per node.
    pub lambda: Vec<[f64; 3]>,
    /// Grid average of `λ(s)`.
    pub lambda_mean: [f64; 3],
    /// `sup |λ(s) − λ̄|`.
    pub constancy_defect: f64,
    /// `sup |μ' − D μ|`: chain-rule `μ'` against differences of `μ`.
    pub mu_residual: f64,
}

/// `μ = f_b'/κ` and `λ(s) = (λ·t) t + (λ·n) n + (λ·b) b` from the
/// first-order conditions; `λ` is constant exactly when the solution is
/// critical.
pub fn multiplier_witness(
    density: &EnergyDensity,
    sol: &OdeSolution,
    curve: &FramedCurve,
) -> Result<MultiplierWitness> {
    sol.require_floor()?;
    if curve.nodes() != sol.nodes() {
        return Err(invalid(format!(
            "curve has {} nodes but the solution has {}",
            curve.nodes(),
            sol.nodes()
        )));
    }
    let d = partials_along(density, sol);
    let n = sol.nodes();
    let mut mu = Vec::with_capacity(n);
    let mut dmu = Vec::with_capacity(n);
    let mut lambda = Vec::with_capacity(n);
    for i in 0..n {
        let (k, dk, t, dt) = (sol.kappa[i], sol.dkappa[i], sol.tau[i], sol.dtau[i]);
        let m = d.dfb[i] / k;
        let dm = (d.ddfb[i] * k - d.dfb[i] * dk) / (k * k);
        let along_n = -d.dfa[i] - m * t;
        let along_b = k * d.fb[i] - t * d.fa[i] + dm;
        let along_t = d.ddfa[i] / k - t * t / k * d.fa[i]
            + 2.0 * t / k * dm
            + dt * d.dfb[i] / (k * k)
            + t * d.fb[i];
        let f = &curve.frames[i];
        let v: Vec3 = f.t * along_t + f.n * along_n + f.b * along_b;
        mu.push(m);
        dmu.push(dm);
        lambda.push([v.x, v.y, v.z]);
    }
    let mut mean = [0.0; 3];
    for l in &lambda {
        for c in 0..3 {
            mean[c] += l[c] / n as f64;
        }
    }
    let constancy_defect = lambda
        .iter()
        .map(|l| {
            ((l[0] - mean[0]).powi(2) + (l[1] - mean[1]).powi(2) + (l[2] - mean[2]).powi(2)).sqrt()
        })
        .fold(0.0, f64::max);
    let h = sol.reached() / (n - 1) as f64;
    let mu_fd = quadrature::derivative(&mu, h);
    let mu_residual = mu_fd
        .iter()
        .zip(&dmu)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(MultiplierWitness {
        mu,
        dmu,
        lambda,
        lambda_mean: mean,
        constancy_defect,
        mu_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Reg1Residual {
    pub first: Vec<f64>,
    pub second: Vec<f64>,
    pub first_sup: f64,
    pub second_sup: f64,
}

/// Pointwise residuals of the multiplier-free system
///
/// ```text
/// 2(τ f_a)' − τ' f_a − (f_b'/κ)'' + (τ²/κ) f_b' − (κ f_b)' = 0
/// −κ f_a' − τ f_b' − ( f_a''/κ − (τ²/κ) f_a + (2τ/κ)(f_b'/κ)' + τ' f_b'/κ² + τ f_b )' = 0
/// ```
///
/// Inner derivatives come from the solution; the outer ones are five-point
/// differences on the output grid.
pub fn reg1_residual(density: &EnergyDensity, sol: &OdeSolution) -> Result<Reg1Residual> {
    sol.require_floor()?;
    let n = sol.nodes();
    if n < 5 {
        return Err(invalid("residual check needs at least 5 nodes"));
    }
    let h = sol.reached() / (n - 1) as f64;
    let d = partials_along(density, sol);
    let k = &sol.kappa;
    let t = &sol.tau;
    let tau_fa: Vec<f64> = (0..n).map(|i| t[i] * d.fa[i]).collect();
    let kappa_fb: Vec<f64> = (0..n).map(|i| k[i] * d.fb[i]).collect();
    let dmu: Vec<f64> = (0..n)
        .map(|i| (d.ddfb[i] * k[i] - d.dfb[i] * sol.dkappa[i]) / (k[i] * k[i]))
        .collect();
    let lambda_t: Vec<f64> = (0..n)
        .map(|i| {
            d.ddfa[i] / k[i] - t[i] * t[i] / k[i] * d.fa[i]
                + 2.0 * t[i] / k[i] * dmu[i]
                + sol.dtau[i] * d.dfb[i] / (k[i] * k[i])
                + t[i] * d.fb[i]
        })
        .collect();
    let d_tau_fa = quadrature::derivative(&tau_fa, h);
    let d_kappa_fb = quadrature::derivative(&kappa_fb, h);
    let ddmu = quadrature::derivative(&dmu, h);
    let d_lambda_t = quadrature::derivative(&lambda_t, h);
    let first: Vec<f64> = (0..n)
        .map(|i| {
            2.0 * d_tau_fa[i] - sol.dtau[i] * d.fa[i] - ddmu[i] + t[i] * t[i] / k[i] * d.dfb[i]
                - d_kappa_fb[i]
        })
        .collect();
    let second: Vec<f64> = (0..n)
        .map(|i| -k[i] * d.dfa[i] - t[i] * d.dfb[i] - d_lambda_t[i])
        .collect();
    let sup = |v: &[f64]| v.iter().map(|x| x.abs()).fold(0.0, f64::max);
    Ok(Reg1Residual {
        first_sup: sup(&first),
        second_sup: sup(&second),
        first,
        second,
    })
}

/// `Q(s) = κ''/κ + (2τ/κ)u' + u² + (κ² + τ²)/2` with κ'' from five-point
/// differences of κ'; equals `c` along solutions of the quadratic model.
pub fn quadratic_conservation(sol: &OdeSolution) -> Result<Vec<f64>> {
    let (Some(u), Some(du)) = (&sol.u, &sol.du) else {
        return Err(invalid(
            "conservation monitor needs a quadratic-model solution",
        ));
    };
    sol.require_floor()?;
    let n = sol.nodes();
    if n < 5 {
        return Err(invalid("conservation monitor needs at least 5 nodes"));
    }
    let h = sol.reached() / (n - 1) as f64;
    let ddk = quadrature::derivative(&sol.dkappa, h);
    Ok((0..n)
        .map(|i| {
            let (k, t) = (sol.kappa[i], sol.tau[i]);
            ddk[i] / k + 2.0 * t / k * du[i] + u[i] * u[i] + 0.5 * (k * k + t * t)
        })
        .collect())
}
