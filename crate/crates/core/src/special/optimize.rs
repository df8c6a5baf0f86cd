//! Derivative-free maximizers.

use super::SpecialError;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of `f` on `[lo, hi]`.
///
/// Exact for unimodal `f`. Otherwise the best sample seen (endpoints
/// included) is returned. Returns `(argmax, max)`.
pub fn maximize_scalar<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let tol = tol.max(f64::EPSILON * (a.abs() + b.abs()));
    let mut best = (a, f(a));
    let consider = |x: f64, fx: f64, best: &mut (f64, f64)| {
        if fx > best.1 || best.1.is_nan() {
            *best = (x, fx);
        }
    };
    let fb = f(b);
    consider(b, fb, &mut best);

    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    consider(x1, f1, &mut best);
    consider(x2, f2, &mut best);
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
            consider(x1, f1, &mut best);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
            consider(x2, f2, &mut best);
        }
    }
    best
}

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    /// Convergence threshold on both simplex diameter and value spread.
    pub tol: f64,
    /// Edge length of the initial simplex (per coordinate).
    pub initial_step: f64,
    pub max_iterations: usize,
    /// Fresh simplices built around the incumbent after a collapse.
    pub max_restarts: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            initial_step: 0.1,
            max_iterations: 10_000,
            max_restarts: 3,
        }
    }
}

/// Nelder–Mead simplex ascent. Returns `(argmax, max)`.
///
/// Deterministic given `x0`. After the simplex collapses a new one is built
/// around the best vertex; the search stops once a restart brings no
/// improvement beyond `tol`.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    opts: &NelderMeadOptions,
) -> Result<(Vec<f64>, f64), SpecialError> {
    let n = x0.len();
    if n == 0 || n > 6 {
        return Err(SpecialError::InvalidParameter(format!(
            "nelder_mead supports 1 to 6 dimensions, got {n}"
        )));
    }
    // Minimize the negated objective.
    let mut eval = |x: &[f64]| -> Result<f64, SpecialError> {
        let v = f(x);
        if v.is_finite() {
            Ok(-v)
        } else {
            Err(SpecialError::NonFinite { at: x[0], value: v })
        }
    };

    let mut iterations = 0usize;
    let mut center = x0.to_vec();
    let mut best_value = eval(&center)?;
    let mut step = opts.initial_step;

    for restart in 0..=opts.max_restarts {
        let mut simplex: Vec<Vec<f64>> = vec![center.clone()];
        for i in 0..n {
            let mut v = center.clone();
            let h = if v[i] != 0.0 {
                step * v[i].abs().max(1.0)
            } else {
                step
            };
            v[i] += h;
            simplex.push(v);
        }
        let mut values = Vec::with_capacity(n + 1);
        for v in &simplex {
            values.push(eval(v)?);
        }

        loop {
            let mut order: Vec<usize> = (0..=n).collect();
            order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
            simplex = order.iter().map(|&i| simplex[i].clone()).collect();
            values = order.iter().map(|&i| values[i]).collect();

            let spread = (values[n] - values[0]).abs();
            let diameter = simplex[1..]
                .iter()
                .map(|v| {
                    v.iter()
                        .zip(&simplex[0])
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            if spread <= opts.tol * (1.0 + values[0].abs()) && diameter <= opts.tol.sqrt() {
                break;
            }
            iterations += 1;
            if iterations > opts.max_iterations {
                return Err(SpecialError::IterationCap(opts.max_iterations));
            }

            let centroid: Vec<f64> = (0..n)
                .map(|j| simplex[..n].iter().map(|v| v[j]).sum::<f64>() / n as f64)
                .collect();
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&simplex[n])
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };
            let xr = along(1.0);
            let fr = eval(&xr)?;
            if fr < values[0] {
                let xe = along(2.0);
                let fe = eval(&xe)?;
                if fe < fr {
                    simplex[n] = xe;
                    values[n] = fe;
                } else {
                    simplex[n] = xr;
                    values[n] = fr;
                }
            } else if fr < values[n - 1] {
                simplex[n] = xr;
                values[n] = fr;
            } else {
                let (xc, fc) = if fr < values[n] {
                    let xc = along(0.5);
                    let fc = eval(&xc)?;
                    (xc, fc)
                } else {
                    let xc = along(-0.5);
                    let fc = eval(&xc)?;
                    (xc, fc)
                };
                if fc < values[n].min(fr) {
                    simplex[n] = xc;
                    values[n] = fc;
                } else {
                    for i in 1..=n {
                        let shrunk: Vec<f64> = simplex[i]
                            .iter()
                            .zip(&simplex[0])
                            .map(|(v, b)| b + 0.5 * (v - b))
                            .collect();
                        values[i] = eval(&shrunk)?;
                        simplex[i] = shrunk;
                    }
                }
            }
        }

        let improved = best_value - values[0] > opts.tol * (1.0 + best_value.abs());
        if values[0] <= best_value {
            best_value = values[0];
            center = simplex[0].clone();
        }
        if restart > 0 && !improved {
            break;
        }
        step *= 0.5;
    }
    Ok((center, -best_value))
}
