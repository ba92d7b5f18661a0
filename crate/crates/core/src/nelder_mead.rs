//! Derivative-free simplex minimization.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    pub max_iterations: usize,
    /// Stop as soon as the best value drops below this.
    pub target: f64,
    /// Relative size of the initial simplex edges.
    pub initial_scale: f64,
    /// Edge used for coordinates that start at zero.
    pub zero_scale: f64,
    /// Restart from the best vertex when the simplex collapses above target.
    pub restarts: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        NelderMeadOptions {
            max_iterations: 2000,
            target: 0.0,
            initial_scale: 0.05,
            zero_scale: 2.5e-4,
            restarts: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadResult {
    pub best: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub reached_target: bool,
}

fn initial_simplex(x0: &[f64], opts: &NelderMeadOptions) -> Vec<Vec<f64>> {
    let mut simplex = vec![x0.to_vec()];
    for i in 0..x0.len() {
        let mut v = x0.to_vec();
        v[i] = if x0[i] != 0.0 {
            x0[i] * (1.0 + opts.initial_scale)
        } else {
            opts.zero_scale
        };
        simplex.push(v);
    }
    simplex
}

/// Minimizes `f` from `x0`. Non-finite values count as worse than any finite
/// one. The returned point is never worse than `x0`.
pub fn minimize<F>(f: F, x0: &[f64], opts: &NelderMeadOptions) -> NelderMeadResult
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut evaluations = 0;
    let mut iterations = 0;
    let mut best = x0.to_vec();
    let mut best_value = eval(x0);
    evaluations += 1;
    if best_value < opts.target || n == 0 {
        return NelderMeadResult {
            best,
            value: best_value,
            iterations,
            evaluations,
            reached_target: best_value < opts.target,
        };
    }

    let mut scale = opts.initial_scale;
    for _restart in 0..=opts.restarts {
        let local = NelderMeadOptions {
            initial_scale: scale,
            ..*opts
        };
        let mut simplex = initial_simplex(&best, &local);
        let mut values: Vec<f64> = simplex
            .iter()
            .enumerate()
            .map(|(i, v)| if i == 0 { best_value } else { eval(v) })
            .collect();
        evaluations += n;

        while iterations < opts.max_iterations {
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            values = order.iter().map(|&i| values[i]).collect();
            if values[0] < best_value {
                best_value = values[0];
                best = simplex[0].clone();
            }
            if best_value < opts.target {
                break;
            }
            let spread = (values[n] - values[0]).abs();
            let size = simplex[1..]
                .iter()
                .map(|v| {
                    v.iter()
                        .zip(&simplex[0])
                        .map(|(a, b)| (a - b).abs() / b.abs().max(1e-3))
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            if (spread <= 1e-15 * values[0].abs().max(1e-300) && values[n].is_finite())
                || size < 1e-13
            {
                break;
            }
            iterations += 1;

            let mut centroid = vec![0.0; n];
            for v in &simplex[..n] {
                for (c, x) in centroid.iter_mut().zip(v) {
                    *c += x / n as f64;
                }
            }
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[n])
                    .map(|(c, w)| c + t * (w - c))
                    .collect()
            };
            let reflected = along(-1.0);
            let fr = eval(&reflected);
            evaluations += 1;
            if fr < values[0] {
                let expanded = along(-2.0);
                let fe = eval(&expanded);
                evaluations += 1;
                if fe < fr {
                    simplex[n] = expanded;
                    values[n] = fe;
                } else {
                    simplex[n] = reflected;
                    values[n] = fr;
                }
            } else if fr < values[n - 1] {
                simplex[n] = reflected;
                values[n] = fr;
            } else {
                let (contracted, fc) = if fr < values[n] {
                    let c = along(-0.5);
                    let v = eval(&c);
                    (c, v)
                } else {
                    let c = along(0.5);
                    let v = eval(&c);
                    (c, v)
                };
                evaluations += 1;
                if fc < values[n].min(fr) {
                    simplex[n] = contracted;
                    values[n] = fc;
                } else {
                    let head = simplex[0].clone();
                    for i in 1..=n {
                        for (x, h) in simplex[i].iter_mut().zip(&head) {
                            *x = h + 0.5 * (*x - h);
                        }
                        values[i] = eval(&simplex[i]);
                    }
                    evaluations += n;
                }
            }
        }
        for (v, fv) in simplex.iter().zip(&values) {
            if *fv < best_value {
                best_value = *fv;
                best = v.clone();
            }
        }
        if best_value < opts.target || iterations >= opts.max_iterations {
            break;
        }
        scale *= 0.1;
    }
    NelderMeadResult {
        reached_target: best_value < opts.target,
        best,
        value: best_value,
        iterations,
        evaluations,
    }
}
