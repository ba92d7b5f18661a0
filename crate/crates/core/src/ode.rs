//! Adaptive Dormand–Prince 5(4) integrator with cubic Hermite dense output
//! and terminal event localization.
//!
//! Output is requested on a grid; steps are clipped so that every grid node
//! is an accepted step end, and the dense interpolant is only used to place
//! events between nodes.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on the step magnitude; `None` means unbounded.
    pub max_step: Option<f64>,
    pub max_steps: usize,
    /// Events are localized to this width in the independent variable.
    pub event_tol: f64,
}

impl OdeOptions {
    pub fn with_tol(tol: f64) -> Self {
        OdeOptions {
            rtol: tol,
            atol: tol,
            ..Default::default()
        }
    }
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-12,
            atol: 1e-12,
            max_step: None,
            max_steps: 5_000_000,
            event_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Stop {
    Completed,
    /// The event function went negative at `s`.
    Event {
        s: f64,
    },
    /// The state stopped being finite or the step size collapsed near `s`.
    NonFinite {
        s: f64,
    },
    StepLimit {
        s: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const D: usize> {
    /// Grid nodes actually reached.
    pub grid: Vec<f64>,
    pub states: Vec<[f64; D]>,
    pub stop: Stop,
    /// State at the event location, when one fired.
    pub event_state: Option<[f64; D]>,
    pub accepted: usize,
    pub rejected: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 5th minus 4th order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const D: usize>(y: &[f64; D], terms: &[(f64, &[f64; D])]) -> [f64; D] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..D {
            out[i] += c * k[i];
        }
    }
    out
}

fn finite<const D: usize>(y: &[f64; D]) -> bool {
    y.iter().all(|v| v.is_finite())
}

/// Cubic Hermite interpolant between two step ends.
pub fn hermite<const D: usize>(
    s0: f64,
    y0: &[f64; D],
    f0: &[f64; D],
    s1: f64,
    y1: &[f64; D],
    f1: &[f64; D],
    s: f64,
) -> [f64; D] {
    let h = s1 - s0;
    let t = (s - s0) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    let mut out = [0.0; D];
    for i in 0..D {
        out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
    }
    out
}

/// Integrates `y' = rhs(s, y)` through the monotone `grid` (ascending or
/// descending) starting from `y0` at `grid[0]`.
///
/// `event(s, y)` is watched after each accepted step; the integration stops
/// at the first point where it becomes negative.
pub fn integrate<const D: usize, F, G>(
    rhs: F,
    y0: [f64; D],
    grid: &[f64],
    opts: &OdeOptions,
    event: Option<G>,
) -> Result<Trajectory<D>>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
    G: Fn(f64, &[f64; D]) -> f64,
{
    if grid.is_empty() {
        return Err(invalid("output grid is empty"));
    }
    if !(opts.rtol > 0.0 && opts.atol > 0.0) {
        return Err(invalid("tolerances must be positive"));
    }
    if !finite(&y0) {
        return Err(invalid("initial state is not finite"));
    }
    let dir = if grid.len() > 1 && grid[grid.len() - 1] < grid[0] {
        -1.0
    } else {
        1.0
    };
    if grid.windows(2).any(|w| (w[1] - w[0]) * dir <= 0.0) {
        return Err(invalid("output grid must be strictly monotone"));
    }

    let mut traj = Trajectory {
        grid: vec![grid[0]],
        states: vec![y0],
        stop: Stop::Completed,
        event_state: None,
        accepted: 0,
        rejected: 0,
    };
    if let Some(g) = &event {
        if g(grid[0], &y0) < 0.0 {
            traj.stop = Stop::Event { s: grid[0] };
            traj.event_state = Some(y0);
            return Ok(traj);
        }
    }
    if grid.len() == 1 {
        return Ok(traj);
    }

    let mut s = grid[0];
    let mut y = y0;
    let mut f = rhs(s, &y);
    let span = (grid[grid.len() - 1] - grid[0]).abs();
    let max_step = opts.max_step.unwrap_or(f64::INFINITY).min(span);
    let mut h = initial_step(&rhs, s, &y, &f, opts, dir).min(max_step);
    let min_step = 16.0 * f64::EPSILON * span.max(1.0);

    for &target in &grid[1..] {
        while (target - s) * dir > 0.0 {
            if traj.accepted + traj.rejected >= opts.max_steps {
                traj.stop = Stop::StepLimit { s };
                return Ok(traj);
            }
            let remaining = (target - s).abs();
            let clipped = h >= remaining;
            let step = if clipped { remaining } else { h };
            if step < min_step && !clipped {
                traj.stop = Stop::NonFinite { s };
                return Ok(traj);
            }
            let hs = dir * step;
            let k1 = f;
            let k2 = rhs(s + C2 * hs, &axpy(&y, &[(hs * A21, &k1)]));
            let k3 = rhs(s + C3 * hs, &axpy(&y, &[(hs * A31, &k1), (hs * A32, &k2)]));
            let k4 = rhs(
                s + C4 * hs,
                &axpy(&y, &[(hs * A41, &k1), (hs * A42, &k2), (hs * A43, &k3)]),
            );
            let k5 = rhs(
                s + C5 * hs,
                &axpy(
                    &y,
                    &[
                        (hs * A51, &k1),
                        (hs * A52, &k2),
                        (hs * A53, &k3),
                        (hs * A54, &k4),
                    ],
                ),
            );
            let k6 = rhs(
                s + hs,
                &axpy(
                    &y,
                    &[
                        (hs * A61, &k1),
                        (hs * A62, &k2),
                        (hs * A63, &k3),
                        (hs * A64, &k4),
                        (hs * A65, &k5),
                    ],
                ),
            );
            let y_new = axpy(
                &y,
                &[
                    (hs * B1, &k1),
                    (hs * B3, &k3),
                    (hs * B4, &k4),
                    (hs * B5, &k5),
                    (hs * B6, &k6),
                ],
            );
            let s_new = if clipped { target } else { s + hs };
            let k7 = rhs(s_new, &y_new);

            let mut err = 0.0;
            for i in 0..D {
                let e = hs
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
                err += (e / sc).powi(2);
            }
            let err = (err / D as f64).sqrt();

            if !err.is_finite() || !finite(&y_new) {
                traj.rejected += 1;
                h = step * 0.1;
                if h < min_step {
                    traj.stop = Stop::NonFinite { s };
                    return Ok(traj);
                }
                continue;
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err > 1.0 {
                traj.rejected += 1;
                h = step * factor.min(1.0);
                continue;
            }
            traj.accepted += 1;

            if let Some(g) = &event {
                if let Some(s_ev) = locate_event(g, s, &y, &f, s_new, &y_new, &k7, opts.event_tol) {
                    let y_ev = hermite(s, &y, &f, s_new, &y_new, &k7, s_ev);
                    traj.stop = Stop::Event { s: s_ev };
                    traj.event_state = Some(y_ev);
                    return Ok(traj);
                }
            }

            let proposal = (step * factor).min(max_step);
            // A clipped step says nothing about the step the error allows.
            h = if clipped { proposal.max(h) } else { proposal };
            s = s_new;
            y = y_new;
            f = k7;
        }
        traj.grid.push(target);
        traj.states.push(y);
    }
    Ok(traj)
}

fn initial_step<const D: usize, F>(
    rhs: &F,
    s: f64,
    y: &[f64; D],
    f: &[f64; D],
    opts: &OdeOptions,
    dir: f64,
) -> f64
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    let scale = |i: usize| opts.atol + opts.rtol * y[i].abs();
    let norm =
        |v: &[f64; D]| ((0..D).map(|i| (v[i] / scale(i)).powi(2)).sum::<f64>() / D as f64).sqrt();
    let d0 = norm(y);
    let d1 = norm(f);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let y1 = axpy(y, &[(dir * h0, f)]);
    let f1 = rhs(s + dir * h0, &y1);
    let mut diff = [0.0; D];
    for i in 0..D {
        diff[i] = f1[i] - f[i];
    }
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1)
}

/// First point in `(s0, s1]` where `g` turns negative on the Hermite
/// interpolant, refined by bisection.
#[allow(clippy::too_many_arguments)]
fn locate_event<const D: usize, G>(
    g: &G,
    s0: f64,
    y0: &[f64; D],
    f0: &[f64; D],
    s1: f64,
    y1: &[f64; D],
    f1: &[f64; D],
    tol: f64,
) -> Option<f64>
where
    G: Fn(f64, &[f64; D]) -> f64,
{
    const PROBES: usize = 8;
    let at = |s: f64| g(s, &hermite(s0, y0, f0, s1, y1, f1, s));
    let mut lo = s0;
    let mut hi = None;
    for j in 1..=PROBES {
        let s = s0 + (s1 - s0) * j as f64 / PROBES as f64;
        let v = if j == PROBES { g(s1, y1) } else { at(s) };
        if v < 0.0 {
            hi = Some(s);
            break;
        }
        lo = s;
    }
    let mut hi = hi?;
    while (hi - lo).abs() > tol {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if at(mid) < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// `n + 1` equally spaced nodes from `a` to `b`, with the last node exactly `b`.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let mut g: Vec<f64> = (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect();
    if let Some(last) = g.last_mut() {
        *last = b;
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    type NoEvent = fn(f64, &[f64; 2]) -> f64;

    #[test]
    fn harmonic_oscillator() {
        let grid = uniform_grid(0.0, 20.0, 200);
        let tr = integrate(
            |_, y: &[f64; 2]| [y[1], -y[0]],
            [1.0, 0.0],
            &grid,
            &OdeOptions::with_tol(1e-12),
            None::<NoEvent>,
        )
        .unwrap();
        assert_eq!(tr.stop, Stop::Completed);
        for (s, y) in tr.grid.iter().zip(&tr.states) {
            assert!((y[0] - s.cos()).abs() < 1e-9, "s={s}");
        }
    }

    #[test]
    fn error_scales_with_tolerance() {
        let grid = uniform_grid(0.0, 10.0, 10);
        let err = |tol: f64| {
            let tr = integrate(
                |_, y: &[f64; 2]| [y[1], -y[0]],
                [1.0, 0.0],
                &grid,
                &OdeOptions::with_tol(tol),
                None::<NoEvent>,
            )
            .unwrap();
            (tr.states.last().unwrap()[0] - 10f64.cos()).abs()
        };
        assert!(err(1e-6) > 10.0 * err(1e-10));
    }

    #[test]
    fn backward_integration() {
        let grid = uniform_grid(3.0, 0.0, 30);
        let tr = integrate(
            |_, y: &[f64; 1]| [y[0]],
            [3f64.exp()],
            &grid,
            &OdeOptions::with_tol(1e-12),
            None::<fn(f64, &[f64; 1]) -> f64>,
        )
        .unwrap();
        assert!((tr.states.last().unwrap()[0] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn event_is_localized() {
        // y = 1 - s crosses 0.25 at s = 0.75
        let grid = uniform_grid(0.0, 2.0, 4);
        let tr = integrate(
            |_, _: &[f64; 1]| [-1.0],
            [1.0],
            &grid,
            &OdeOptions::default(),
            Some(|_, y: &[f64; 1]| y[0] - 0.25),
        )
        .unwrap();
        match tr.stop {
            Stop::Event { s } => assert!((s - 0.75).abs() <= 1e-12),
            other => panic!("{other:?}"),
        }
        assert_eq!(tr.grid, vec![0.0, 0.5]);
    }

    #[test]
    fn blow_up_is_reported() {
        // y' = y², y(0) = 1 blows up at s = 1
        let grid = uniform_grid(0.0, 2.0, 2);
        let tr = integrate(
            |_, y: &[f64; 1]| [y[0] * y[0]],
            [1.0],
            &grid,
            &OdeOptions::default(),
            None::<fn(f64, &[f64; 1]) -> f64>,
        )
        .unwrap();
        assert!(
            matches!(tr.stop, Stop::NonFinite { .. } | Stop::StepLimit { .. }),
            "{:?}",
            tr.stop
        );
        assert_eq!(tr.grid.len(), 1);
    }

    #[test]
    fn rejects_bad_grid() {
        let r = integrate(
            |_, y: &[f64; 1]| [y[0]],
            [1.0],
            &[0.0, 1.0, 0.5],
            &OdeOptions::default(),
            None::<fn(f64, &[f64; 1]) -> f64>,
        );
        assert!(r.is_err());
    }
}
