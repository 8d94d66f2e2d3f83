//! Derivative-free Nelder–Mead minimization with restarts.

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOptions {
    /// Initial simplex edge along each coordinate.
    pub step: f64,
    /// Stop when the simplex's function-value spread falls below this.
    pub f_tol: f64,
    /// ... and its largest coordinate spread below this.
    pub x_tol: f64,
    pub max_evals: usize,
    /// Restarts from the best point until two successive runs improve by
    /// less than `f_tol`.
    pub max_restarts: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { step: 0.3, f_tol: 1e-12, x_tol: 1e-6, max_evals: 20_000, max_restarts: 20 }
    }
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub f: f64,
    pub evaluations: usize,
    pub converged: bool,
}

struct Run {
    x: Vec<f64>,
    f: f64,
    evals: usize,
    converged: bool,
}

fn single_run<F: FnMut(&[f64]) -> f64>(f: &mut F, x0: &[f64], opts: &NelderMeadOptions, budget: usize) -> Run {
    let n = x0.len();
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), f0));
    for k in 0..n {
        let mut x = x0.to_vec();
        x[k] += opts.step;
        let fx = eval(&x, &mut evals);
        simplex.push((x, fx));
    }
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        let spread_f = (worst - best).abs();
        let spread_x = (0..n)
            .map(|k| {
                let (lo, hi) = simplex
                    .iter()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (x, _)| (lo.min(x[k]), hi.max(x[k])));
                hi - lo
            })
            .fold(0.0, f64::max);
        if spread_f <= opts.f_tol && spread_x <= opts.x_tol {
            return Run { x: simplex[0].0.clone(), f: best, evals, converged: true };
        }
        if evals >= budget {
            return Run { x: simplex[0].0.clone(), f: best, evals, converged: false };
        }
        let centroid: Vec<f64> =
            (0..n).map(|k| simplex[..n].iter().map(|(x, _)| x[k]).sum::<f64>() / n as f64).collect();
        let towards =
            |coef: f64| -> Vec<f64> { centroid.iter().zip(&simplex[n].0).map(|(c, w)| c + coef * (c - w)).collect() };
        let xr = towards(alpha);
        let fr = eval(&xr, &mut evals);
        if fr < simplex[0].1 {
            let xe = towards(gamma);
            let fe = eval(&xe, &mut evals);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < simplex[n].1 {
            let xc = towards(rho);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        } else {
            let xc = towards(-rho);
            let fc = eval(&xc, &mut evals);
            (xc, fc)
        };
        if fc < fr.min(simplex[n].1) {
            simplex[n] = (xc, fc);
            continue;
        }
        let x_best = simplex[0].0.clone();
        for entry in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = x_best.iter().zip(&entry.0).map(|(b, v)| b + sigma * (v - b)).collect();
            let fx = eval(&x, &mut evals);
            *entry = (x, fx);
        }
    }
}

/// Minimizes `f` from `x0`. A run restarts from its best point with a fresh
/// simplex until a restart no longer improves the value by more than `f_tol`.
pub fn minimize<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum {
    let mut current = single_run(&mut f, x0, opts, opts.max_evals);
    let mut total = current.evals;
    for _ in 0..opts.max_restarts {
        if !current.converged || total >= opts.max_evals {
            break;
        }
        let next = single_run(&mut f, &current.x, opts, opts.max_evals - total);
        total += next.evals;
        if next.f < current.f - opts.f_tol {
            current = next;
            continue;
        }
        if next.f < current.f {
            current.x = next.x;
            current.f = next.f;
        }
        return Minimum { x: current.x, f: current.f, evaluations: total, converged: true };
    }
    Minimum { x: current.x, f: current.f, evaluations: total, converged: false }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let m = minimize(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.2, 1.0],
            &NelderMeadOptions { f_tol: 1e-20, x_tol: 1e-10, ..Default::default() },
        );
        assert!(m.converged);
        assert!((m.x[0] - 1.0).abs() < 1e-6 && (m.x[1] - 1.0).abs() < 1e-6, "{m:?}");
    }

    #[test]
    fn quadratic_in_four_dimensions() {
        let m = minimize(
            |x| x.iter().enumerate().map(|(k, v)| (k as f64 + 1.0) * (v - 0.5).powi(2)).sum(),
            &[0.0; 4],
            &NelderMeadOptions::default(),
        );
        assert!(m.converged);
        assert!(m.f < 1e-12);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let m = minimize(
            |x| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2),
            &[-1.2, 1.0],
            &NelderMeadOptions { max_evals: 20, ..Default::default() },
        );
        assert!(!m.converged);
        assert!(m.evaluations <= 25);
    }

    #[test]
    fn nan_is_treated_as_infinite() {
        let m = minimize(
            |x| if x[0] < 0.0 { f64::NAN } else { (x[0] - 2.0).powi(2) },
            &[1.0],
            &NelderMeadOptions::default(),
        );
        assert!((m.x[0] - 2.0).abs() < 1e-6);
    }
}
