//! Gauss-Legendre rules and adaptive panel integration.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// `n`-point Gauss-Legendre rule on `[-1, 1]`.
    ///
    /// Roots are found by Newton iteration on the three-term recurrence.
    /// Rules are cached per order.
    pub fn legendre(n: usize) -> Arc<GaussRule> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&n) {
            return Arc::clone(rule);
        }
        let rule = Arc::new(Self::compute_legendre(n));
        cache.lock().expect("rule cache poisoned").entry(n).or_insert_with(|| Arc::clone(&rule));
        rule
    }

    fn compute_legendre(n: usize) -> GaussRule {
        assert!(n > 0, "Gauss-Legendre order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussRule { nodes, weights }
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Upper bound on the number of panels before giving up.
    pub max_panels: usize,
    pub initial_panels: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-14, rel_tol: 1e-12, max_panels: 4000, initial_panels: 4 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Estimate<const K: usize> {
    pub value: [f64; K],
    pub error: f64,
    pub panels: usize,
}

struct Panel<const K: usize> {
    a: f64,
    b: f64,
    value: [f64; K],
    error: f64,
}

const LOW_ORDER: usize = 10;
const HIGH_ORDER: usize = 21;

fn panel<const K: usize, F>(f: &mut F, a: f64, b: f64, low: &GaussRule, high: &GaussRule) -> Panel<K>
where
    F: FnMut(f64) -> [f64; K],
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let apply = |rule: &GaussRule, f: &mut F| {
        let mut acc = [0.0; K];
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let v = f(mid + half * x);
            for k in 0..K {
                acc[k] += w * v[k];
            }
        }
        acc.map(|v| v * half)
    };
    let coarse = apply(low, f);
    let fine = apply(high, f);
    let error = coarse.iter().zip(&fine).map(|(c, f)| (c - f).abs()).fold(0.0, f64::max);
    Panel { a, b, value: fine, error }
}

/// Globally adaptive integration of a vector-valued integrand over `[a, b]`.
///
/// Each panel is integrated with a 10- and a 21-point Gauss-Legendre rule;
/// the difference is the panel's error estimate. The panel with the largest
/// error is bisected until the summed error drops below
/// `max(abs_tol, rel_tol·max_k |I_k|)`.
pub fn integrate_adaptive<const K: usize, F>(mut f: F, a: f64, b: f64, opts: &AdaptiveOptions) -> Result<Estimate<K>>
where
    F: FnMut(f64) -> [f64; K],
{
    let low = GaussRule::legendre(LOW_ORDER);
    let high = GaussRule::legendre(HIGH_ORDER);
    let n0 = opts.initial_panels.max(1);
    let width = (b - a) / n0 as f64;
    let mut panels: Vec<Panel<K>> = (0..n0)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == n0 { b } else { lo + width };
            panel(&mut f, lo, hi, &low, &high)
        })
        .collect();
    loop {
        let mut total = [0.0; K];
        let mut err = 0.0;
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            for k in 0..K {
                total[k] += p.value[k];
            }
            err += p.error;
            if p.error > panels[worst].error {
                worst = i;
            }
        }
        let scale = total.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = opts.abs_tol.max(opts.rel_tol * scale);
        if !err.is_finite() {
            return Err(Error::QuadratureNotConverged {
                what: "adaptive Gauss-Legendre (non-finite integrand)".into(),
                estimate: err,
                tolerance: tol,
            });
        }
        if err <= tol {
            return Ok(Estimate { value: total, error: err, panels: panels.len() });
        }
        if panels.len() >= opts.max_panels {
            return Err(Error::QuadratureNotConverged {
                what: "adaptive Gauss-Legendre".into(),
                estimate: err,
                tolerance: tol,
            });
        }
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        panels.push(panel(&mut f, p.a, mid, &low, &high));
        panels.push(panel(&mut f, mid, p.b, &low, &high));
    }
}

/// Scalar convenience wrapper around [`integrate_adaptive`].
pub fn integrate<F>(mut f: F, a: f64, b: f64, opts: &AdaptiveOptions) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let est = integrate_adaptive(|x| [f(x)], a, b, opts)?;
    Ok((est.value[0], est.error))
}

/// `∫₀^∞ f(x) dx` through the map `x = s·t/(1-t)`, `t ∈ [0, 1)`.
///
/// `scale` should be of the order of the integrand's decay length.
pub fn integrate_half_line<const K: usize, F>(mut f: F, scale: f64, opts: &AdaptiveOptions) -> Result<Estimate<K>>
where
    F: FnMut(f64) -> [f64; K],
{
    integrate_adaptive(
        |t| {
            let one_minus = 1.0 - t;
            if one_minus <= 0.0 {
                return [0.0; K];
            }
            let x = scale * t / one_minus;
            let jac = scale / (one_minus * one_minus);
            let v = f(x);
            if v.iter().all(|c| *c == 0.0) {
                return [0.0; K];
            }
            v.map(|c| c * jac)
        },
        0.0,
        1.0,
        opts,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 10, 21, 64] {
            let rule = GaussRule::legendre(n);
            let wsum: f64 = rule.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-13, "n={n}");
            for deg in 0..(2 * n) {
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                let got: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(deg as i32)).sum();
                assert!((got - exact).abs() < 1e-12, "n={n} deg={deg}: {got}");
            }
        }
    }

    #[test]
    fn adaptive_handles_peaks() {
        let opts = AdaptiveOptions::default();
        let (v, _) = integrate(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, &opts).unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!(((v - exact) / exact).abs() < 1e-11);
    }

    #[test]
    fn half_line_gaussian_moments() {
        let opts = AdaptiveOptions::default();
        let est = integrate_half_line(|x| [(-x * x).exp(), x * x * (-x * x).exp()], 1.0, &opts).unwrap();
        assert!((est.value[0] - PI.sqrt() / 2.0).abs() < 1e-13);
        assert!((est.value[1] - PI.sqrt() / 4.0).abs() < 1e-13);
    }

    #[test]
    fn non_convergence_is_reported() {
        let opts = AdaptiveOptions { max_panels: 8, ..Default::default() };
        let res = integrate(|x| (1.0 / x).sin(), 1e-9, 1.0, &opts);
        assert!(matches!(res, Err(Error::QuadratureNotConverged { .. })));
    }
}
