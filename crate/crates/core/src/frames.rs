//! Framed curves generated by a curvature/torsion profile.
//!
//! A frame `(t, n, b)` is advanced along arclength by
//!
//! ```text
//! t' = κ n,   n' = -κ t + τ b,   b' = -τ n
//! ```
//!
//! and the curve is `r(s) = x₀ + ∫ t`. Each grid step holds (κ, τ) constant at
//! its midpoint value, so the frame update is an exact rotation about the
//! Darboux vector and the position update is the exact helix chord.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::quadrature;

pub type Vec3 = Vector3<f64>;

/// Positively oriented orthonormal triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub t: Vec3,
    pub n: Vec3,
    pub b: Vec3,
}

impl Frame {
    /// Absolute slack used when validating user-supplied frames.
    pub const TOLERANCE: f64 = 1e-12;

    pub fn identity() -> Self {
        Frame {
            t: Vec3::x(),
            n: Vec3::y(),
            b: Vec3::z(),
        }
    }

    pub fn new(t: Vec3, n: Vec3, b: Vec3) -> Result<Self> {
        let f = Frame { t, n, b };
        let err = f.orthonormality_error();
        if !(err <= Self::TOLERANCE) {
            return Err(invalid(format!(
                "frame is not orthonormal (max |FᵀF - I| = {err:e})"
            )));
        }
        let det = f.matrix().determinant();
        if !((det - 1.0).abs() <= Self::TOLERANCE) {
            return Err(invalid(format!(
                "frame is not positively oriented (det = {det})"
            )));
        }
        Ok(f)
    }

    /// Columns are `t`, `n`, `b`.
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_columns(&[self.t, self.n, self.b])
    }

    pub fn from_matrix(m: &Matrix3<f64>) -> Self {
        Frame {
            t: m.column(0).into_owned(),
            n: m.column(1).into_owned(),
            b: m.column(2).into_owned(),
        }
    }

    /// Max entry of `|FᵀF - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let m = self.matrix();
        (m.transpose() * m - Matrix3::identity()).abs().max()
    }
}

impl Default for Frame {
    fn default() -> Self {
        Frame::identity()
    }
}

/// How node values are turned into the constant (κ, τ) used on each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    /// Each step uses the value of its left node.
    PiecewiseConstantMidpoint,
    /// Linear between nodes, sampled at the step midpoint.
    #[default]
    PiecewiseLinear,
}

/// Curvature and torsion sampled on the uniform grid `s_i = i L / N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureTorsionProfile {
    length: f64,
    kappa: Vec<f64>,
    tau: Vec<f64>,
    interpolation: Interpolation,
}

impl CurvatureTorsionProfile {
    pub fn new(
        length: f64,
        kappa: Vec<f64>,
        tau: Vec<f64>,
        interpolation: Interpolation,
    ) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(invalid(format!(
                "length must be positive and finite, got {length}"
            )));
        }
        if kappa.len() != tau.len() {
            return Err(invalid(format!(
                "curvature has {} nodes but torsion has {}",
                kappa.len(),
                tau.len()
            )));
        }
        if kappa.len() < 3 {
            return Err(invalid(format!(
                "a profile needs at least 3 nodes (N >= 2), got {}",
                kappa.len()
            )));
        }
        if let Some(i) = kappa.iter().chain(tau.iter()).position(|v| !v.is_finite()) {
            return Err(invalid(format!(
                "non-finite profile value at flat index {i}"
            )));
        }
        Ok(CurvatureTorsionProfile {
            length,
            kappa,
            tau,
            interpolation,
        })
    }

    /// Constant profile with `intervals + 1` nodes.
    pub fn constant(length: f64, intervals: usize, kappa: f64, tau: f64) -> Result<Self> {
        Self::new(
            length,
            vec![kappa; intervals + 1],
            vec![tau; intervals + 1],
            Interpolation::PiecewiseLinear,
        )
    }

    /// Samples `f(s) -> (κ, τ)` at the grid nodes.
    pub fn from_fn(length: f64, intervals: usize, f: impl Fn(f64) -> (f64, f64)) -> Result<Self> {
        let h = length / intervals as f64;
        let (kappa, tau) = (0..=intervals).map(|i| f(i as f64 * h)).unzip();
        Self::new(length, kappa, tau, Interpolation::PiecewiseLinear)
    }

    pub fn with_interpolation(mut self, interpolation: Interpolation) -> Self {
        self.interpolation = interpolation;
        self
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Number of grid intervals `N`.
    pub fn intervals(&self) -> usize {
        self.kappa.len() - 1
    }

    pub fn nodes(&self) -> usize {
        self.kappa.len()
    }

    pub fn step(&self) -> f64 {
        self.length / self.intervals() as f64
    }

    pub fn arclength(&self, i: usize) -> f64 {
        if i == self.intervals() {
            self.length
        } else {
            i as f64 * self.step()
        }
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub fn tau(&self) -> &[f64] {
        &self.tau
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    /// True when every torsion sample is exactly zero.
    pub fn is_planar(&self) -> bool {
        self.tau.iter().all(|&t| t == 0.0)
    }

    /// (κ, τ) held on sub-step `j` of `substeps` inside interval `i`.
    fn step_values(&self, i: usize, j: usize, substeps: usize) -> (f64, f64) {
        match self.interpolation {
            Interpolation::PiecewiseConstantMidpoint => (self.kappa[i], self.tau[i]),
            Interpolation::PiecewiseLinear => {
                let w = (j as f64 + 0.5) / substeps as f64;
                (
                    self.kappa[i] + w * (self.kappa[i + 1] - self.kappa[i]),
                    self.tau[i] + w * (self.tau[i + 1] - self.tau[i]),
                )
            }
        }
    }
}

/// Options for [`integrate_frame`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepOptions {
    /// Exact-rotation sub-steps per grid interval; only nodes are stored.
    pub substeps: usize,
}

impl Default for StepOptions {
    fn default() -> Self {
        StepOptions { substeps: 1 }
    }
}

/// Node positions and frames reconstructed from a profile.
#[derive(Debug, Clone, PartialEq)]
pub struct FramedCurve {
    pub base: Vec3,
    pub positions: Vec<Vec3>,
    pub frames: Vec<Frame>,
    pub profile: CurvatureTorsionProfile,
}

impl FramedCurve {
    pub fn nodes(&self) -> usize {
        self.positions.len()
    }

    pub fn step(&self) -> f64 {
        self.profile.step()
    }

    pub fn start(&self) -> (Vec3, &Frame) {
        (self.positions[0], &self.frames[0])
    }

    pub fn end(&self) -> (Vec3, &Frame) {
        let last = self.positions.len() - 1;
        (self.positions[last], &self.frames[last])
    }

    /// Largest orthonormality error over all node frames.
    pub fn max_orthonormality_error(&self) -> f64 {
        self.frames
            .iter()
            .map(Frame::orthonormality_error)
            .fold(0.0, f64::max)
    }
}

/// Rotation and body-frame displacement for one step of length `h` with
/// constant (κ, τ).
///
/// With the skew generator `A` (so that `F' = F A` for `F = (t|n|b)`) and
/// `θ = h √(κ² + τ²)`:
/// `exp(hA) = I + h·sinθ/θ·A + h²·(1 − cosθ)/θ²·A²` and
/// `∫₀ʰ exp(σA) e₁ dσ = h e₁ + h²·(1 − cosθ)/θ²·A e₁ + h³·(θ − sinθ)/θ³·A² e₁`.
fn helix_step(kappa: f64, tau: f64, h: f64) -> (Matrix3<f64>, Vec3) {
    let theta2 = h * h * (kappa * kappa + tau * tau);
    let (s1, c1, c2) = if theta2 < 1e-6 {
        let t2 = theta2;
        (
            1.0 - t2 / 6.0 + t2 * t2 / 120.0 - t2 * t2 * t2 / 5040.0,
            0.5 - t2 / 24.0 + t2 * t2 / 720.0 - t2 * t2 * t2 / 40320.0,
            1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0 - t2 * t2 * t2 / 362880.0,
        )
    } else {
        let theta = theta2.sqrt();
        let (sin, cos) = theta.sin_cos();
        (
            sin / theta,
            (1.0 - cos) / theta2,
            (theta - sin) / (theta2 * theta),
        )
    };
    #[rustfmt::skip]
    let a = Matrix3::new(
        0.0,   -kappa, 0.0,
        kappa,  0.0,  -tau,
        0.0,    tau,   0.0,
    );
    #[rustfmt::skip]
    let a2 = Matrix3::new(
        -kappa * kappa, 0.0,                         kappa * tau,
        0.0,            -(kappa * kappa + tau * tau), 0.0,
        kappa * tau,    0.0,                         -tau * tau,
    );
    let rot = Matrix3::identity() + a * (h * s1) + a2 * (h * h * c1);
    let disp = Vec3::new(
        h - h * h * h * c2 * kappa * kappa,
        h * h * c1 * kappa,
        h * h * h * c2 * kappa * tau,
    );
    (rot, disp)
}

/// Reconstructs the framed curve of `profile` starting from `init` at `x0`.
pub fn integrate_frame(
    profile: &CurvatureTorsionProfile,
    init: &Frame,
    x0: Vec3,
    opts: &StepOptions,
) -> Result<FramedCurve> {
    let init = Frame::new(init.t, init.n, init.b)?;
    if !x0.iter().all(|v| v.is_finite()) {
        return Err(invalid("base point must be finite"));
    }
    if opts.substeps == 0 {
        return Err(invalid("substeps must be at least 1"));
    }
    let n = profile.intervals();
    let m = opts.substeps;
    let h = profile.step() / m as f64;
    let mut positions = Vec::with_capacity(n + 1);
    let mut frames = Vec::with_capacity(n + 1);
    let mut rot = init.matrix();
    let mut r = x0;
    positions.push(r);
    frames.push(init);
    for i in 0..n {
        for j in 0..m {
            let (k, t) = profile.step_values(i, j, m);
            let (step_rot, disp) = helix_step(k, t, h);
            r += rot * disp;
            rot *= step_rot;
        }
        positions.push(r);
        frames.push(Frame::from_matrix(&rot));
    }
    Ok(FramedCurve {
        base: x0,
        positions,
        frames,
        profile: profile.clone(),
    })
}

/// Integrates from the origin with the identity frame.
pub fn integrate_canonical(profile: &CurvatureTorsionProfile) -> Result<FramedCurve> {
    integrate_frame(
        profile,
        &Frame::identity(),
        Vec3::zeros(),
        &StepOptions::default(),
    )
}

/// Axial vector `(τ h, 0, κ h)` of the body-frame rotation between two frames.
fn relative_rotation_log(a: &Frame, b: &Frame) -> Vec3 {
    let rel = a.matrix().transpose() * b.matrix();
    let skew = (rel - rel.transpose()) * 0.5;
    let axial = Vec3::new(skew[(2, 1)], skew[(0, 2)], skew[(1, 0)]);
    let sin = axial.norm();
    let cos = ((rel.trace() - 1.0) * 0.5).clamp(-1.0, 1.0);
    let angle = sin.atan2(cos);
    if sin < 1e-300 {
        axial
    } else {
        axial * (angle / sin)
    }
}

/// Recovers (κ, τ) at the nodes of a curve from the exact per-step
/// rotations: interior nodes average the two adjacent steps, the two ends
/// extrapolate linearly. Constant profiles come back exactly.
pub fn extract_curvature_torsion(curve: &FramedCurve) -> Result<CurvatureTorsionProfile> {
    let nodes = curve.frames.len();
    if nodes < 3 {
        return Err(invalid("curve needs at least 3 nodes"));
    }
    let h = curve.step();
    let f = &curve.frames;
    let steps: Vec<(f64, f64)> = (0..nodes - 1)
        .map(|i| {
            let w = relative_rotation_log(&f[i], &f[i + 1]);
            (w.z / h, w.x / h)
        })
        .collect();
    let mut kappa = vec![0.0; nodes];
    let mut tau = vec![0.0; nodes];
    for i in 1..nodes - 1 {
        kappa[i] = 0.5 * (steps[i - 1].0 + steps[i].0);
        tau[i] = 0.5 * (steps[i - 1].1 + steps[i].1);
    }
    let last = nodes - 2;
    if nodes >= 4 {
        kappa[0] = 1.5 * steps[0].0 - 0.5 * steps[1].0;
        tau[0] = 1.5 * steps[0].1 - 0.5 * steps[1].1;
        kappa[nodes - 1] = 1.5 * steps[last].0 - 0.5 * steps[last - 1].0;
        tau[nodes - 1] = 1.5 * steps[last].1 - 0.5 * steps[last - 1].1;
    } else {
        (kappa[0], tau[0]) = steps[0];
        (kappa[nodes - 1], tau[nodes - 1]) = steps[last];
    }
    CurvatureTorsionProfile::new(
        curve.profile.length(),
        kappa,
        tau,
        curve.profile.interpolation(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosureMode {
    Planar,
    Spatial,
}

/// Closure diagnostics for a reconstructed curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    /// `position_gap + tangent_gap`.
    pub defect: f64,
    pub position_gap: f64,
    pub tangent_gap: f64,
    /// `(C, S)`, planar mode only.
    pub planar_integrals: Option<(f64, f64)>,
}

/// `d = |r(L) − r(0)| + |t(L) − t(0)|`.
///
/// With the canonical start (origin, identity frame) this is the stop
/// quantity `|r(L)| + |t(L) − e₁|`.
pub fn closure_defect(curve: &FramedCurve, mode: ClosureMode) -> Result<ClosureReport> {
    let planar_integrals = match mode {
        ClosureMode::Planar => Some(planar_closure_integrals(&curve.profile)?),
        ClosureMode::Spatial => None,
    };
    let (r0, f0) = curve.start();
    let (r1, f1) = curve.end();
    let position_gap = (r1 - r0).norm();
    let tangent_gap = (f1.t - f0.t).norm();
    Ok(ClosureReport {
        defect: position_gap + tangent_gap,
        position_gap,
        tangent_gap,
        planar_integrals,
    })
}

/// `C = ∫ cos θ`, `S = ∫ sin θ` with `θ(s) = ∫₀ˢ κ`, by composite Simpson on the
/// profile grid. The turning angle is the running trapezoid integral of κ,
/// which is exact for the piecewise-linear profile.
pub fn planar_closure_integrals(profile: &CurvatureTorsionProfile) -> Result<(f64, f64)> {
    if !profile.is_planar() {
        return Err(invalid("planar closure integrals need zero torsion"));
    }
    let h = profile.step();
    let theta = match profile.interpolation() {
        Interpolation::PiecewiseLinear => quadrature::cumulative_trapezoid(profile.kappa(), h),
        Interpolation::PiecewiseConstantMidpoint => {
            let mut acc = 0.0;
            let mut out = Vec::with_capacity(profile.nodes());
            out.push(0.0);
            for k in &profile.kappa()[..profile.intervals()] {
                acc += k * h;
                out.push(acc);
            }
            out
        }
    };
    let cos: Vec<f64> = theta.iter().map(|t| t.cos()).collect();
    let sin: Vec<f64> = theta.iter().map(|t| t.sin()).collect();
    Ok((quadrature::simpson(&cos, h), quadrature::simpson(&sin, h)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn circle(n: usize) -> FramedCurve {
        let p = CurvatureTorsionProfile::constant(2.0 * PI, n, 1.0, 0.0).unwrap();
        integrate_canonical(&p).unwrap()
    }

    #[test]
    fn unit_circle_closes() {
        let c = circle(4096);
        let (r, f) = c.end();
        assert!(r.norm() < 1e-12, "{}", r.norm());
        assert!((f.t - Vec3::x()).norm() < 1e-12);
        let rep = closure_defect(&c, ClosureMode::Planar).unwrap();
        assert!(rep.defect <= 1e-12);
    }

    #[test]
    fn semicircle_defect_is_four() {
        let p = CurvatureTorsionProfile::constant(PI, 1000, 1.0, 0.0).unwrap();
        let c = integrate_canonical(&p).unwrap();
        let rep = closure_defect(&c, ClosureMode::Spatial).unwrap();
        assert!((rep.position_gap - 2.0).abs() < 1e-10);
        assert!((rep.tangent_gap - 2.0).abs() < 1e-10);
        assert!((rep.defect - 4.0).abs() < 1e-10);
    }

    #[test]
    fn helix_matches_closed_form() {
        let (k, t) = (1.0_f64, 0.5_f64);
        let len = 4.0 * PI;
        let p = CurvatureTorsionProfile::constant(len, 2000, k, t).unwrap();
        let c = integrate_canonical(&p).unwrap();
        // Classical helix (a cos ωs, a sin ωs, c ω s) with a = κ/ω², c = τ/ω².
        let w = (k * k + t * t).sqrt();
        let a = k / (w * w);
        let pitch = t / (w * w);
        assert!((a - 0.8).abs() < 1e-15 && (pitch - 0.4).abs() < 1e-15);
        let helix = |s: f64| Vec3::new(a * (w * s).cos(), a * (w * s).sin(), pitch * w * s);
        let t0 = Vec3::new(0.0, a * w, pitch * w);
        let n0 = Vec3::new(-1.0, 0.0, 0.0);
        let b0 = t0.cross(&n0);
        let basis = Matrix3::from_columns(&[t0, n0, b0]).transpose();
        for (i, r) in c.positions.iter().enumerate() {
            let s = p.arclength(i);
            let expect = basis * (helix(s) - helix(0.0));
            assert!(
                (r - expect).norm() < 1e-8,
                "node {i}: {}",
                (r - expect).norm()
            );
        }
    }

    #[test]
    fn frames_stay_orthonormal() {
        let p = CurvatureTorsionProfile::from_fn(30.0, 5000, |s| {
            (2.0 * (3.0 * s).sin() + 0.3, 1.5 * (0.7 * s).cos() - 0.2)
        })
        .unwrap();
        let c = integrate_canonical(&p).unwrap();
        assert!(c.max_orthonormality_error() <= 1e-12);
        for f in &c.frames {
            assert!((f.matrix().determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn chord_never_exceeds_step() {
        let p = CurvatureTorsionProfile::from_fn(10.0, 400, |s| (3.0 * s.sin(), s.cos())).unwrap();
        let c = integrate_canonical(&p).unwrap();
        let h = p.step();
        for w in c.positions.windows(2) {
            let chord = (w[1] - w[0]).norm();
            assert!(chord <= h * (1.0 + 1e-14));
            assert!(h - chord < h * h * h * 10.0);
        }
        assert_eq!(c.positions[0], Vec3::zeros());
    }

    #[test]
    fn base_point_is_kept_exactly() {
        let p = CurvatureTorsionProfile::constant(1.0, 10, 0.3, 0.1).unwrap();
        let x0 = Vec3::new(0.1, -2.0, 3.3);
        let c = integrate_frame(&p, &Frame::identity(), x0, &StepOptions::default()).unwrap();
        assert_eq!(c.positions[0], x0);
    }

    #[test]
    fn round_trip_constants() {
        let c = circle(1000);
        let back = extract_curvature_torsion(&c).unwrap();
        let ke = back
            .kappa()
            .iter()
            .map(|k| (k - 1.0).abs())
            .fold(0.0, f64::max);
        let te = back.tau().iter().map(|t| t.abs()).fold(0.0, f64::max);
        assert!(ke <= 1e-5 && te <= 1e-5, "{ke} {te}");

        let p = CurvatureTorsionProfile::constant(2.0 * PI, 1000, 1.0, 0.5).unwrap();
        let back = extract_curvature_torsion(&integrate_canonical(&p).unwrap()).unwrap();
        for (k, t) in back.kappa().iter().zip(back.tau()) {
            assert!((k - 1.0).abs() <= 1e-5 && (t - 0.5).abs() <= 1e-5);
        }
    }

    #[test]
    fn round_trip_is_second_order_inside() {
        let f = |s: f64| (1.0 + 0.5 * s.sin(), 0.3 * (2.0 * s).cos());
        let err = |n: usize| {
            let p = CurvatureTorsionProfile::from_fn(2.0 * PI, n, f).unwrap();
            let back = extract_curvature_torsion(&integrate_canonical(&p).unwrap()).unwrap();
            (1..n)
                .map(|i| {
                    (back.kappa()[i] - p.kappa()[i])
                        .abs()
                        .max((back.tau()[i] - p.tau()[i]).abs())
                })
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(200), err(400));
        assert!(e1 / e2 > 3.5, "ratio {}", e1 / e2);
    }

    #[test]
    fn three_node_curve_extracts() {
        let p = CurvatureTorsionProfile::constant(1.0, 2, 1.0, 0.2).unwrap();
        let back = extract_curvature_torsion(&integrate_canonical(&p).unwrap()).unwrap();
        assert!(back.kappa().iter().chain(back.tau()).all(|v| v.is_finite()));
        assert_eq!(back.nodes(), 3);
    }

    #[test]
    fn rejects_bad_profiles() {
        assert!(CurvatureTorsionProfile::new(
            1.0,
            vec![0.0; 2],
            vec![0.0; 2],
            Interpolation::PiecewiseLinear
        )
        .is_err());
        assert!(CurvatureTorsionProfile::new(
            1.0,
            vec![0.0, f64::NAN, 0.0],
            vec![0.0; 3],
            Interpolation::PiecewiseLinear
        )
        .is_err());
        assert!(CurvatureTorsionProfile::new(
            0.0,
            vec![0.0; 3],
            vec![0.0; 3],
            Interpolation::PiecewiseLinear
        )
        .is_err());
        assert!(CurvatureTorsionProfile::new(
            1.0,
            vec![0.0; 3],
            vec![0.0; 4],
            Interpolation::PiecewiseLinear
        )
        .is_err());
    }

    #[test]
    fn rejects_bad_initial_frame() {
        let p = CurvatureTorsionProfile::constant(1.0, 4, 1.0, 0.0).unwrap();
        let skewed = Frame {
            t: Vec3::x(),
            n: Vec3::new(0.1, 1.0, 0.0),
            b: Vec3::z(),
        };
        assert!(integrate_frame(&p, &skewed, Vec3::zeros(), &StepOptions::default()).is_err());
        let left = Frame {
            t: Vec3::x(),
            n: Vec3::y(),
            b: -Vec3::z(),
        };
        assert!(integrate_frame(&p, &left, Vec3::zeros(), &StepOptions::default()).is_err());
    }

    #[test]
    fn planar_mode_rejects_torsion() {
        let p = CurvatureTorsionProfile::constant(1.0, 4, 1.0, 0.1).unwrap();
        let c = integrate_canonical(&p).unwrap();
        assert!(closure_defect(&c, ClosureMode::Planar).is_err());
        assert!(planar_closure_integrals(&p).is_err());
        assert!(closure_defect(&c, ClosureMode::Spatial).is_ok());
    }

    #[test]
    fn planar_integrals_simple_cases() {
        let p = CurvatureTorsionProfile::constant(2.0 * PI, 512, 1.0, 0.0).unwrap();
        let (c, s) = planar_closure_integrals(&p).unwrap();
        assert!(c.abs() < 1e-10 && s.abs() < 1e-10);
        let p = CurvatureTorsionProfile::constant(1.0, 10, 0.0, 0.0).unwrap();
        assert_eq!(planar_closure_integrals(&p).unwrap(), (1.0, 0.0));
    }

    #[test]
    fn signed_curvature_turns_the_other_way() {
        let p = CurvatureTorsionProfile::constant(PI / 2.0, 100, -1.0, 0.0).unwrap();
        let c = integrate_canonical(&p).unwrap();
        let (r, _) = c.end();
        assert!((r - Vec3::new(1.0, -1.0, 0.0)).norm() < 1e-12);
    }
}
