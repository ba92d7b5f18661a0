//! Energy densities `f(s, a, b)` evaluated at `a = κ`, `b = τ`, their
//! quadrature along a profile, and sampled probes of the growth, coercivity
//! and convexity hypotheses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::frames::CurvatureTorsionProfile;
use crate::parallel;
use crate::quadrature;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityKind {
    /// `a²`
    Euler,
    /// `(a² + b²) / 2`
    Quadratic,
    /// `(a² + b²)² / a²` for `|a| > |b|`, `4 b²` otherwise.
    Sadowsky,
    /// `λ₁ + λ₂ b + λ₃ a² / 2`
    LangerSinger {
        lambda1: f64,
        lambda2: f64,
        lambda3: f64,
    },
    /// `w_a |a|^p + w_b |b|^p`
    Custom { weight_a: f64, weight_b: f64 },
}

/// Lower bound `f ≥ c₁|a|^p + c₂|b|^p + c₃`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coercivity {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

/// A density together with the constants it claims to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyDensity {
    pub kind: DensityKind,
    /// Growth exponent `p > 1`.
    pub exponent: f64,
    pub coercivity: Option<Coercivity>,
    /// Constant `c` of `f ≤ c(1 + |a|^p + |b|^p)` and of the matching bound on
    /// the partials.
    pub growth: f64,
}

/// Value, gradient and the second and third partials used by chain-rule
/// derivatives along a curve. Higher partials are zero where a closed form
/// does not exist (the Sadowsky seam).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DensityJet {
    pub f: f64,
    pub fa: f64,
    pub fb: f64,
    pub faa: f64,
    pub fab: f64,
    pub fbb: f64,
    pub faaa: f64,
    pub faab: f64,
    pub fabb: f64,
    pub fbbb: f64,
}

impl EnergyDensity {
    pub fn euler() -> Self {
        EnergyDensity {
            kind: DensityKind::Euler,
            exponent: 2.0,
            coercivity: None,
            growth: 2.0,
        }
    }

    pub fn quadratic() -> Self {
        EnergyDensity {
            kind: DensityKind::Quadratic,
            exponent: 2.0,
            coercivity: Some(Coercivity {
                c1: 0.5,
                c2: 0.5,
                c3: 0.0,
            }),
            growth: 1.0,
        }
    }

    /// Declares `f ≥ a² + 2b²`.
    pub fn sadowsky() -> Self {
        EnergyDensity {
            kind: DensityKind::Sadowsky,
            exponent: 2.0,
            coercivity: Some(Coercivity {
                c1: 1.0,
                c2: 2.0,
                c3: 0.0,
            }),
            growth: 8.0,
        }
    }

    pub fn langer_singer(lambda1: f64, lambda2: f64, lambda3: f64) -> Self {
        let growth = (lambda1.abs() + lambda2.abs() + 0.5 * lambda3.abs())
            .max(lambda3.abs())
            .max(lambda2.abs());
        EnergyDensity {
            kind: DensityKind::LangerSinger {
                lambda1,
                lambda2,
                lambda3,
            },
            exponent: 2.0,
            coercivity: None,
            growth,
        }
    }

    pub fn custom(weight_a: f64, weight_b: f64, exponent: f64) -> Result<Self> {
        if !(exponent > 1.0 && exponent.is_finite()) {
            return Err(invalid(format!(
                "growth exponent must exceed 1, got {exponent}"
            )));
        }
        if !(weight_a >= 0.0 && weight_b >= 0.0) {
            return Err(invalid("custom density weights must be non-negative"));
        }
        let coercivity = (weight_a > 0.0 && weight_b > 0.0).then_some(Coercivity {
            c1: weight_a,
            c2: weight_b,
            c3: 0.0,
        });
        Ok(EnergyDensity {
            kind: DensityKind::Custom { weight_a, weight_b },
            exponent,
            coercivity,
            growth: (weight_a + weight_b) * exponent.max(1.0),
        })
    }

    /// Builds a catalog density from a name and parameter list, as used by
    /// config files and the command line.
    pub fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        let need = |n: usize| {
            if params.len() == n {
                Ok(())
            } else {
                Err(invalid(format!(
                    "density `{name}` takes {n} parameters, got {}",
                    params.len()
                )))
            }
        };
        match name {
            "euler" => need(0).map(|_| Self::euler()),
            "quadratic" => need(0).map(|_| Self::quadratic()),
            "sadowsky" => need(0).map(|_| Self::sadowsky()),
            "langer_singer" => {
                need(3)?;
                Ok(Self::langer_singer(params[0], params[1], params[2]))
            }
            "custom" => {
                need(3)?;
                Self::custom(params[0], params[1], params[2])
            }
            other => Err(invalid(format!("unknown density `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            DensityKind::Euler => "euler",
            DensityKind::Quadratic => "quadratic",
            DensityKind::Sadowsky => "sadowsky",
            DensityKind::LangerSinger { .. } => "langer_singer",
            DensityKind::Custom { .. } => "custom",
        }
    }

    pub fn with_coercivity(mut self, c1: f64, c2: f64, c3: f64) -> Self {
        self.coercivity = Some(Coercivity { c1, c2, c3 });
        self
    }

    pub fn with_growth(mut self, c: f64) -> Self {
        self.growth = c;
        self
    }

    /// `(f, f_a, f_b)`. Catalog densities do not depend on `s`.
    pub fn evaluate(&self, s: f64, a: f64, b: f64) -> (f64, f64, f64) {
        let j = self.jet(s, a, b);
        (j.f, j.fa, j.fb)
    }

    pub fn jet(&self, _s: f64, a: f64, b: f64) -> DensityJet {
        match self.kind {
            DensityKind::Euler => DensityJet {
                f: a * a,
                fa: 2.0 * a,
                faa: 2.0,
                ..Default::default()
            },
            DensityKind::Quadratic => DensityJet {
                f: 0.5 * (a * a + b * b),
                fa: a,
                fb: b,
                faa: 1.0,
                fbb: 1.0,
                ..Default::default()
            },
            DensityKind::LangerSinger {
                lambda1,
                lambda2,
                lambda3,
            } => DensityJet {
                f: lambda1 + lambda2 * b + 0.5 * lambda3 * a * a,
                fa: lambda3 * a,
                fb: lambda2,
                faa: lambda3,
                ..Default::default()
            },
            DensityKind::Custom { weight_a, weight_b } => {
                let p = self.exponent;
                let (pa, pa1, pa2, pa3) = power_jet(a, p);
                let (pb, pb1, pb2, pb3) = power_jet(b, p);
                DensityJet {
                    f: weight_a * pa + weight_b * pb,
                    fa: weight_a * pa1,
                    fb: weight_b * pb1,
                    faa: weight_a * pa2,
                    fbb: weight_b * pb2,
                    faaa: weight_a * pa3,
                    fbbb: weight_b * pb3,
                    ..Default::default()
                }
            }
            DensityKind::Sadowsky => sadowsky_jet(a, b),
        }
    }
}

/// `|x|^p` and its first three derivatives.
fn power_jet(x: f64, p: f64) -> (f64, f64, f64, f64) {
    if x == 0.0 {
        // Second derivative is 2 for p = 2, 0 for p > 2 and unbounded below.
        let d2 = if p == 2.0 { 2.0 } else { 0.0 };
        return (0.0, 0.0, d2, 0.0);
    }
    let ax = x.abs();
    let sg = x.signum();
    (
        ax.powf(p),
        p * sg * ax.powf(p - 1.0),
        p * (p - 1.0) * ax.powf(p - 2.0),
        p * (p - 1.0) * (p - 2.0) * sg * ax.powf(p - 3.0),
    )
}

/// Which closed form of the Sadowsky density applies at `(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SadowskyBranch {
    /// `|a| > |b|`: `(a² + b²)² / a²`
    Bending,
    /// `|a| ≤ |b|`: `4 b²`
    Twist,
}

impl SadowskyBranch {
    pub fn at(a: f64, b: f64) -> Self {
        if a.abs() > b.abs() {
            SadowskyBranch::Bending
        } else {
            SadowskyBranch::Twist
        }
    }

    /// `(f, f_a, f_b)` of this branch's closed form, evaluated wherever it is
    /// defined (the bending form needs `a ≠ 0`).
    pub fn evaluate(self, a: f64, b: f64) -> (f64, f64, f64) {
        match self {
            SadowskyBranch::Bending => {
                let q = a * a + b * b;
                (
                    q * q / (a * a),
                    2.0 * q * (a * a - b * b) / (a * a * a),
                    4.0 * b * q / (a * a),
                )
            }
            SadowskyBranch::Twist => (4.0 * b * b, 0.0, 8.0 * b),
        }
    }
}

fn sadowsky_jet(a: f64, b: f64) -> DensityJet {
    if a == 0.0 && b == 0.0 {
        return DensityJet::default();
    }
    match SadowskyBranch::at(a, b) {
        SadowskyBranch::Twist => DensityJet {
            f: 4.0 * b * b,
            fb: 8.0 * b,
            fbb: 8.0,
            ..Default::default()
        },
        SadowskyBranch::Bending => {
            // f = a² + 2b² + b⁴ a⁻²
            let (a2, b2) = (a * a, b * b);
            let (a3, a4, a5) = (a2 * a, a2 * a2, a2 * a2 * a);
            DensityJet {
                f: a2 + 2.0 * b2 + b2 * b2 / a2,
                fa: 2.0 * a - 2.0 * b2 * b2 / a3,
                fb: 4.0 * b + 4.0 * b2 * b / a2,
                faa: 2.0 + 6.0 * b2 * b2 / a4,
                fab: -8.0 * b2 * b / a3,
                fbb: 4.0 + 12.0 * b2 / a2,
                faaa: -24.0 * b2 * b2 / a5,
                faab: 24.0 * b2 * b / a4,
                fabb: -24.0 * b2 / a3,
                fbbb: 24.0 * b / a2,
            }
        }
    }
}

/// `(f, f_a, f_b)` at `(s, a, b)`.
pub fn evaluate_density(
    density: &EnergyDensity,
    s: f64,
    a: f64,
    b: f64,
) -> Result<(f64, f64, f64)> {
    if !(s.is_finite() && a.is_finite() && b.is_finite()) {
        return Err(invalid("density arguments must be finite"));
    }
    Ok(density.evaluate(s, a, b))
}

/// Quadrature rule for [`evaluate_energy_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnergyQuadrature {
    #[default]
    Simpson,
    /// Equal weights on interior nodes; cannot be lowered by odd/even noise.
    Trapezoid,
}

/// `E = ∫₀ᴸ f(s, κ, τ) ds` by composite Simpson on the profile grid.
pub fn evaluate_energy(density: &EnergyDensity, profile: &CurvatureTorsionProfile) -> f64 {
    evaluate_energy_with(density, profile, EnergyQuadrature::Simpson)
}

pub fn evaluate_energy_with(
    density: &EnergyDensity,
    profile: &CurvatureTorsionProfile,
    rule: EnergyQuadrature,
) -> f64 {
    let integrand: Vec<f64> = profile
        .kappa()
        .iter()
        .zip(profile.tau())
        .enumerate()
        .map(|(i, (&k, &t))| density.evaluate(profile.arclength(i), k, t).0)
        .collect();
    match rule {
        EnergyQuadrature::Simpson => quadrature::simpson(&integrand, profile.step()),
        EnergyQuadrature::Trapezoid => quadrature::trapezoid(&integrand, profile.step()),
    }
}

/// Sampling setup for [`probe_density`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeOptions {
    pub a_range: (f64, f64),
    pub b_range: (f64, f64),
    pub a_samples: usize,
    pub b_samples: usize,
    /// Finite-difference step relative to `max(|a|, |b|)` (absolute at the
    /// origin).
    pub fd_step: f64,
    pub convexity_pairs: usize,
    pub seed: u64,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            a_range: (-5.0, 5.0),
            b_range: (-5.0, 5.0),
            a_samples: 101,
            b_samples: 101,
            fd_step: 1e-6,
            convexity_pairs: 10_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Violations {
    pub count: usize,
    /// `(a, b)` of the largest violation and its size.
    pub worst: Option<(f64, f64, f64)>,
}

impl Violations {
    fn record(&mut self, a: f64, b: f64, amount: f64) {
        self.count += 1;
        if self.worst.is_none_or(|w| amount > w.2) {
            self.worst = Some((a, b, amount));
        }
    }

    fn merge(mut self, other: Violations) -> Violations {
        self.count += other.count;
        if let Some(w) = other.worst {
            if self.worst.is_none_or(|m| w.2 > m.2) {
                self.worst = Some(w);
            }
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DensityProbeReport {
    /// `None` when the density declares no coercivity constants.
    pub coercivity: Option<Violations>,
    pub upper_growth: Violations,
    pub partial_growth: Violations,
    pub convexity: Violations,
    /// Largest `‖∇f − ∇_fd f‖ / ‖∇f‖` over the grid (absolute where `∇f = 0`).
    pub max_partial_deviation: f64,
    pub worst_partial_point: Option<(f64, f64)>,
    pub grid_points: usize,
    pub convexity_pairs: usize,
    /// Grid points skipped by the finite-difference check (the Sadowsky origin).
    pub fd_skipped: usize,
}

#[derive(Default)]
struct PointReport {
    coercivity: Violations,
    upper: Violations,
    partial: Violations,
    deviation: f64,
    skipped: usize,
}

fn check_point(d: &EnergyDensity, a: f64, b: f64, fd_step: f64) -> PointReport {
    let mut rep = PointReport::default();
    let p = d.exponent;
    let (f, fa, fb) = d.evaluate(0.0, a, b);
    let slack = 1e-12 * f.abs().max(1.0);
    if let Some(c) = d.coercivity {
        let lower = c.c1 * a.abs().powf(p) + c.c2 * b.abs().powf(p) + c.c3;
        if f < lower - slack {
            rep.coercivity.record(a, b, lower - f);
        }
    }
    let upper = d.growth * (1.0 + a.abs().powf(p) + b.abs().powf(p));
    if f > upper + slack {
        rep.upper.record(a, b, f - upper);
    }
    let pbound = d.growth * (1.0 + a.abs().powf(p - 1.0) + b.abs().powf(p - 1.0));
    let worst_partial = fa.abs().max(fb.abs());
    if worst_partial > pbound * (1.0 + 1e-12) {
        rep.partial.record(a, b, worst_partial - pbound);
    }
    if matches!(d.kind, DensityKind::Sadowsky) && a == 0.0 && b == 0.0 {
        rep.skipped = 1;
        return rep;
    }
    let scale = a.abs().max(b.abs());
    let h = if scale > 0.0 {
        fd_step * scale
    } else {
        fd_step
    };
    let fd_a = (d.evaluate(0.0, a + h, b).0 - d.evaluate(0.0, a - h, b).0) / (2.0 * h);
    let fd_b = (d.evaluate(0.0, a, b + h).0 - d.evaluate(0.0, a, b - h).0) / (2.0 * h);
    let diff = (fd_a - fa).hypot(fd_b - fb);
    let norm = fa.hypot(fb);
    rep.deviation = if norm > 0.0 { diff / norm } else { diff };
    rep
}

/// Samples the hypotheses on a grid and on random pairs. Violations are
/// counted, never raised.
pub fn probe_density(density: &EnergyDensity, opts: &ProbeOptions) -> Result<DensityProbeReport> {
    let (a0, a1) = opts.a_range;
    let (b0, b1) = opts.b_range;
    if ![a0, a1, b0, b1].iter().all(|v| v.is_finite()) || a0 > a1 || b0 > b1 {
        return Err(invalid("probe box must be finite and ordered"));
    }
    if opts.a_samples < 3 || opts.b_samples < 3 {
        return Err(invalid("probe grid needs at least 3 samples per axis"));
    }
    if !(opts.fd_step > 0.0) {
        return Err(invalid("finite-difference step must be positive"));
    }
    let na = opts.a_samples;
    let nb = opts.b_samples;
    let grid_a = |i: usize| a0 + (a1 - a0) * i as f64 / (na - 1) as f64;
    let grid_b = |j: usize| b0 + (b1 - b0) * j as f64 / (nb - 1) as f64;

    let rows = parallel::map_indexed(na, |i| {
        let a = grid_a(i);
        let mut acc = PointReport::default();
        let mut worst = None;
        for j in 0..nb {
            let b = grid_b(j);
            let r = check_point(density, a, b, opts.fd_step);
            acc.coercivity = acc.coercivity.merge(r.coercivity);
            acc.upper = acc.upper.merge(r.upper);
            acc.partial = acc.partial.merge(r.partial);
            acc.skipped += r.skipped;
            if r.deviation > acc.deviation || worst.is_none() {
                acc.deviation = acc.deviation.max(r.deviation);
                worst = Some((a, b));
            }
        }
        (acc, worst)
    });

    let mut report = DensityProbeReport {
        grid_points: na * nb,
        convexity_pairs: opts.convexity_pairs,
        ..Default::default()
    };
    let mut coercivity = Violations::default();
    for (row, worst) in rows {
        coercivity = coercivity.merge(row.coercivity);
        report.upper_growth = report.upper_growth.merge(row.upper);
        report.partial_growth = report.partial_growth.merge(row.partial);
        report.fd_skipped += row.skipped;
        if row.deviation >= report.max_partial_deviation {
            report.max_partial_deviation = row.deviation;
            report.worst_partial_point = worst;
        }
    }
    report.coercivity = density.coercivity.map(|_| coercivity);

    const CHUNK: usize = 1024;
    let chunks = opts.convexity_pairs.div_ceil(CHUNK);
    let pieces = parallel::map_indexed(chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(c as u64);
        let mut v = Violations::default();
        let count = CHUNK.min(opts.convexity_pairs - c * CHUNK);
        for _ in 0..count {
            let (xa, xb) = (rng.gen_range(a0..=a1), rng.gen_range(b0..=b1));
            let (ya, yb) = (rng.gen_range(a0..=a1), rng.gen_range(b0..=b1));
            let (ma, mb) = (0.5 * (xa + ya), 0.5 * (xb + yb));
            let fx = density.evaluate(0.0, xa, xb).0;
            let fy = density.evaluate(0.0, ya, yb).0;
            let fm = density.evaluate(0.0, ma, mb).0;
            let avg = 0.5 * (fx + fy);
            let slack = 1e-12 * avg.abs().max(1.0);
            if fm > avg + slack {
                v.record(ma, mb, fm - avg);
            }
        }
        v
    });
    report.convexity = pieces
        .into_iter()
        .fold(Violations::default(), Violations::merge);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn catalog_values() {
        assert_eq!(
            EnergyDensity::euler().evaluate(0.0, 3.0, 7.0),
            (9.0, 6.0, 0.0)
        );
        let s = EnergyDensity::sadowsky();
        assert_eq!(s.evaluate(0.0, 1.0, 1.0).0, 4.0);
        assert_eq!(SadowskyBranch::Bending.evaluate(1.0, 1.0).0, 4.0);
        assert_eq!(SadowskyBranch::Twist.evaluate(1.0, 1.0).0, 4.0);
        assert!((s.evaluate(0.0, 2.0, 1.0).0 - 6.25).abs() < 1e-15);
        assert_eq!(s.evaluate(0.0, 0.0, 0.0), (0.0, 0.0, 0.0));
        let ls = EnergyDensity::langer_singer(1.0, 2.0, 4.0);
        assert_eq!(ls.evaluate(0.0, 1.0, 3.0), (1.0 + 6.0 + 2.0, 4.0, 2.0));
    }

    #[test]
    fn sadowsky_twist_branch_at_zero_curvature_is_smooth() {
        let s = EnergyDensity::sadowsky();
        assert_eq!(s.evaluate(0.0, 0.0, 2.0), (16.0, 0.0, 16.0));
    }

    #[test]
    fn rejects_non_finite_arguments() {
        assert!(evaluate_density(&EnergyDensity::euler(), 0.0, f64::NAN, 0.0).is_err());
        assert!(evaluate_density(&EnergyDensity::euler(), f64::INFINITY, 1.0, 0.0).is_err());
    }

    #[test]
    fn energy_closed_forms() {
        let circle = CurvatureTorsionProfile::constant(2.0 * PI, 4096, 1.0, 0.0).unwrap();
        assert!((evaluate_energy(&EnergyDensity::euler(), &circle) - 2.0 * PI).abs() < 1e-12);
        let p = CurvatureTorsionProfile::constant(1.0, 100, 1.0, 1.0).unwrap();
        assert!((evaluate_energy(&EnergyDensity::quadratic(), &p) - 1.0).abs() < 1e-12);
        // trial circle of length L: κ = 2π/L, E = 4π²/L
        let len = 3.0;
        let trial = CurvatureTorsionProfile::constant(len, 64, 2.0 * PI / len, 0.0).unwrap();
        let e = evaluate_energy(&EnergyDensity::euler(), &trial);
        assert!((e - 4.0 * PI * PI / len).abs() < 1e-12 * e);
    }

    #[test]
    fn sadowsky_coercivity_on_grid() {
        let rep = probe_density(&EnergyDensity::sadowsky(), &ProbeOptions::default()).unwrap();
        let c = rep.coercivity.unwrap();
        assert_eq!(c.count, 0, "{c:?}");
        assert_eq!(rep.convexity.count, 0);
        assert_eq!(rep.upper_growth.count, 0);
        assert_eq!(rep.partial_growth.count, 0);
        assert_eq!(rep.fd_skipped, 1);
        assert!(
            rep.max_partial_deviation <= 1e-6,
            "{}",
            rep.max_partial_deviation
        );
    }

    #[test]
    fn euler_is_not_coercive_in_torsion() {
        let d = EnergyDensity::euler().with_coercivity(0.5, 0.1, 0.0);
        let rep = probe_density(&d, &ProbeOptions::default()).unwrap();
        let c = rep.coercivity.unwrap();
        assert!(c.count > 0);
        let (a, b, _) = c.worst.unwrap();
        assert!(b.abs() > a.abs());
        assert_eq!(EnergyDensity::euler().coercivity, None);
    }

    #[test]
    fn quadratic_partials_match_differences() {
        let opts = ProbeOptions {
            fd_step: 1e-6,
            ..Default::default()
        };
        let rep = probe_density(&EnergyDensity::quadratic(), &opts).unwrap();
        assert!(rep.max_partial_deviation <= 1e-6);
        assert_eq!(rep.coercivity.unwrap().count, 0);
    }

    #[test]
    fn probe_rejects_small_grid() {
        let opts = ProbeOptions {
            a_samples: 2,
            ..Default::default()
        };
        assert!(probe_density(&EnergyDensity::euler(), &opts).is_err());
    }

    #[test]
    fn non_convex_custom_density_is_flagged() {
        // p ≤ 1 is refused; a negative langer-singer λ₃ breaks convexity.
        assert!(EnergyDensity::custom(1.0, 1.0, 1.0).is_err());
        let d = EnergyDensity::langer_singer(0.0, 0.0, -1.0);
        let rep = probe_density(&d, &ProbeOptions::default()).unwrap();
        assert!(rep.convexity.count > 0);
    }

    #[test]
    fn second_partials_match_differences() {
        let h = 1e-5;
        for d in [
            EnergyDensity::sadowsky(),
            EnergyDensity::quadratic(),
            EnergyDensity::custom(1.0, 2.0, 3.0).unwrap(),
        ] {
            for &(a, b) in &[(2.0, 1.0), (1.5, -0.7), (0.3, 2.0), (-3.0, 0.5)] {
                let j = d.jet(0.0, a, b);
                let jp = d.jet(0.0, a + h, b);
                let jm = d.jet(0.0, a - h, b);
                let kp = d.jet(0.0, a, b + h);
                let km = d.jet(0.0, a, b - h);
                let close = |x: f64, y: f64| (x - y).abs() <= 1e-5 * (1.0 + y.abs());
                assert!(close((jp.fa - jm.fa) / (2.0 * h), j.faa));
                assert!(close((kp.fa - km.fa) / (2.0 * h), j.fab));
                assert!(close((kp.fb - km.fb) / (2.0 * h), j.fbb));
                assert!(close((jp.faa - jm.faa) / (2.0 * h), j.faaa));
                assert!(close((jp.fab - jm.fab) / (2.0 * h), j.faab));
                assert!(close((kp.fab - km.fab) / (2.0 * h), j.fabb));
                assert!(close((kp.fbb - km.fbb) / (2.0 * h), j.fbbb));
            }
        }
    }

    #[test]
    fn names_round_trip() {
        for name in ["euler", "quadratic", "sadowsky"] {
            assert_eq!(EnergyDensity::from_name(name, &[]).unwrap().name(), name);
        }
        assert!(EnergyDensity::from_name("euler", &[1.0]).is_err());
        assert!(EnergyDensity::from_name("nope", &[]).is_err());
        let d = EnergyDensity::from_name("langer_singer", &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(d.name(), "langer_singer");
    }
}
