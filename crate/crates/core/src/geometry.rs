//! Hyperspherical measures in D dimensions.
//!
//! For an s-state the Wigner function depends on the phase-space point only
//! through `r = |r|`, `p = |p|` and the angle `u` between the two vectors. A
//! 2D-dimensional phase-space integral of such a function collapses to
//!
//! ```text
//! ∫∫ f d^Dr d^Dp = S_D S_{D-1} ∫₀^∞ dr ∫₀^∞ dp ∫₀^π du  r^{D-1} p^{D-1} (sin u)^{D-2} f(r, p, u)
//! ```
//!
//! where the momentum polar axis is taken along `r`. [`ReducedMeasure`]
//! carries the prefactor and the three powers.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::GaussRule;

/// Spatial dimension `D ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain(format!("dimension must be at least 2, got {d}")));
        }
        Ok(Self(d))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0)
    }
}

impl TryFrom<u32> for Dimension {
    type Error = Error;

    fn try_from(d: u32) -> Result<Self> {
        Self::new(d)
    }
}

impl From<Dimension> for u32 {
    fn from(d: Dimension) -> u32 {
        d.0
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for real `x`, Lanczos approximation (g = 7, nine terms) with the
/// reflection formula below 1/2.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (k, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + k as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

/// Total solid angle `S_d = 2π^{d/2}/Γ(d/2)`.
///
/// Defined for `d ≥ 1`; `S_1 = 2` counts the two endpoints of the 0-sphere
/// and is what makes the D = 2 reduced measure come out right.
pub fn solid_angle(d: u32) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("solid angle needs d >= 1".into()));
    }
    let half = f64::from(d) / 2.0;
    Ok(2.0 * PI.powf(half) / gamma(half))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedMeasure {
    pub d: Dimension,
    /// `S_D · S_{D-1}`.
    pub prefactor: f64,
    pub radial_power: i32,
    pub momentum_power: i32,
    pub angle_power: i32,
}

impl ReducedMeasure {
    /// Density of the reduced measure at `(r, p, u)`, prefactor included.
    pub fn density(&self, r: f64, p: f64, u: f64) -> f64 {
        self.prefactor * r.powi(self.radial_power) * p.powi(self.momentum_power) * u.sin().powi(self.angle_power)
    }
}

pub fn reduced_measure(d: Dimension) -> ReducedMeasure {
    let n = d.get();
    // n >= 2 so both solid angles exist.
    let prefactor = solid_angle(n).expect("d >= 2") * solid_angle(n - 1).expect("d >= 2");
    let dm1 = n as i32 - 1;
    ReducedMeasure { d, prefactor, radial_power: dm1, momentum_power: dm1, angle_power: dm1 - 1 }
}

/// Tensor-product quadrature over `(r, p, u)` carrying the reduced measure in
/// its weights.
///
/// `r` and `p` use Gauss-Legendre on `[0, 1)` mapped to the half line by
/// `x = s·t/(1-t)`; `u` uses Gauss-Legendre on `[0, π]`.
#[derive(Debug, Clone)]
pub struct ReducedGrid {
    measure: ReducedMeasure,
    r: Vec<(f64, f64)>,
    p: Vec<(f64, f64)>,
    u: Vec<(f64, f64)>,
}

fn half_line_nodes(rule: &GaussRule, scale: f64, power: i32) -> Vec<(f64, f64)> {
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &w)| {
            let t = 0.5 * (x + 1.0);
            let one_minus = 1.0 - t;
            let pos = scale * t / one_minus;
            let jac = scale / (one_minus * one_minus);
            (pos, 0.5 * w * jac * pos.powi(power))
        })
        .collect()
}

impl ReducedGrid {
    pub fn new(d: Dimension, r_scale: f64, p_scale: f64, n_r: usize, n_p: usize, n_u: usize) -> Result<Self> {
        if !(r_scale > 0.0 && p_scale > 0.0) {
            return Err(Error::Domain("grid scales must be positive".into()));
        }
        if n_r == 0 || n_p == 0 || n_u == 0 {
            return Err(Error::Domain("grid orders must be positive".into()));
        }
        let measure = reduced_measure(d);
        let r = half_line_nodes(&GaussRule::legendre(n_r), r_scale, measure.radial_power);
        let p = half_line_nodes(&GaussRule::legendre(n_p), p_scale, measure.momentum_power);
        let u_rule = GaussRule::legendre(n_u);
        let u = u_rule
            .nodes
            .iter()
            .zip(&u_rule.weights)
            .map(|(&x, &w)| {
                let u = 0.5 * PI * (x + 1.0);
                (u, 0.5 * PI * w * u.sin().powi(measure.angle_power))
            })
            .collect();
        Ok(Self { measure, r, p, u })
    }

    pub fn measure(&self) -> &ReducedMeasure {
        &self.measure
    }

    pub fn len(&self) -> usize {
        self.r.len() * self.p.len() * self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `∫∫ f d^Dr d^Dp` for `f` depending only on `(r, p, u)`.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(f64, f64, f64) -> f64,
    {
        let mut total = 0.0;
        for &(r, wr) in &self.r {
            let mut over_p = 0.0;
            for &(p, wp) in &self.p {
                let mut over_u = 0.0;
                for &(u, wu) in &self.u {
                    over_u += wu * f(r, p, u);
                }
                over_p += wp * over_u;
            }
            total += wr * over_p;
        }
        self.measure.prefactor * total
    }

    /// Doubles all three orders, starting from `start`, until two successive
    /// estimates agree to `rel_tol`. Returns `(value, |last change|)`.
    pub fn integrate_converged<F>(
        d: Dimension,
        r_scale: f64,
        p_scale: f64,
        start: usize,
        rel_tol: f64,
        f: F,
    ) -> Result<(f64, f64)>
    where
        F: Fn(f64, f64, f64) -> f64,
    {
        const MAX_ORDER: usize = 256;
        let mut n = start.max(4);
        let mut prev = Self::new(d, r_scale, p_scale, n, n, n)?.integrate(&f);
        loop {
            n *= 2;
            if n > MAX_ORDER {
                return Err(Error::QuadratureNotConverged {
                    what: "reduced tensor grid".into(),
                    estimate: f64::NAN,
                    tolerance: rel_tol,
                });
            }
            let next = Self::new(d, r_scale, p_scale, n, n, n)?.integrate(&f);
            let change = (next - prev).abs();
            if change <= rel_tol * next.abs().max(f64::MIN_POSITIVE) {
                return Ok((next, change));
            }
            prev = next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    /// Γ(n/2) by the recursion Γ(x+1) = xΓ(x) from Γ(1) = 1, Γ(1/2) = √π.
    fn gamma_half_integer(n: u32) -> f64 {
        let (mut x, mut g) = if n % 2 == 0 { (1.0, 1.0) } else { (0.5, PI.sqrt()) };
        while x < f64::from(n) / 2.0 {
            g *= x;
            x += 1.0;
        }
        g
    }

    #[test]
    fn gamma_matches_recursion_at_half_integers() {
        for n in 1..=40 {
            let exact = gamma_half_integer(n);
            let approx = gamma(f64::from(n) / 2.0);
            assert!(((approx - exact) / exact).abs() < 1e-13, "n={n}: {approx} vs {exact}");
        }
    }

    #[test]
    fn solid_angle_values() {
        assert!((solid_angle(3).unwrap() - 4.0 * PI).abs() < 1e-13);
        assert!((solid_angle(2).unwrap() - 2.0 * PI).abs() < 1e-13);
        assert!((solid_angle(1).unwrap() - 2.0).abs() < 1e-14);
        let s4 = 2.0 * PI * PI / gamma_half_integer(4);
        assert!((solid_angle(4).unwrap() - s4).abs() < 1e-12);
        assert!((s4 - 2.0 * PI * PI).abs() < 1e-12);
        assert!(matches!(solid_angle(0), Err(Error::Domain(_))));
    }

    #[test]
    fn solid_angle_recursion() {
        for d in 1..30 {
            let lhs = solid_angle(d + 2).unwrap();
            let rhs = solid_angle(d).unwrap() * 2.0 * PI / f64::from(d);
            assert!(((lhs - rhs) / rhs).abs() < 1e-13, "d={d}");
        }
    }

    #[test]
    fn dimension_rejects_one() {
        assert!(Dimension::new(1).is_err());
        assert!(Dimension::new(0).is_err());
        assert_eq!(Dimension::new(2).unwrap().get(), 2);
    }

    #[test]
    fn reduced_measure_prefactors() {
        let m3 = reduced_measure(Dimension::new(3).unwrap());
        assert!((m3.prefactor - 8.0 * PI * PI).abs() < 1e-12);
        assert_eq!((m3.radial_power, m3.momentum_power, m3.angle_power), (2, 2, 1));
        let m2 = reduced_measure(Dimension::new(2).unwrap());
        assert!((m2.prefactor - 4.0 * PI).abs() < 1e-12);
        assert_eq!((m2.radial_power, m2.momentum_power, m2.angle_power), (1, 1, 0));
    }

    #[test]
    fn gaussian_integrates_to_pi_to_the_d() {
        for d in 2..=6 {
            let dim = Dimension::new(d).unwrap();
            let grid = ReducedGrid::new(dim, 1.0, 1.0, 96, 96, 24).unwrap();
            let val = grid.integrate(|r, p, _| (-r * r - p * p).exp());
            let exact = PI.powi(d as i32);
            assert!(((val - exact) / exact).abs() < 1e-10, "d={d}: {val} vs {exact}");
        }
    }

    /// Full 2D-dimensional Monte Carlo with the standard normal proposal
    /// `exp(-(|r|²+|p|²)/2)/(2π)^D`, wider than every test integrand.
    fn mc_full_space(d: usize, n: usize, seed: u64, f: impl Fn(f64, f64, f64) -> f64) -> (f64, f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let norm = (2.0 * PI).powi(d as i32);
        let (mut sum, mut sum2) = (0.0, 0.0);
        for _ in 0..n {
            let x: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let q: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            let p = q.iter().map(|v| v * v).sum::<f64>().sqrt();
            let dot: f64 = x.iter().zip(&q).map(|(a, b)| a * b).sum();
            let u = (dot / (r * p)).clamp(-1.0, 1.0).acos();
            // integrand / proposal density
            let val = f(r, p, u) / (-0.5 * (r * r + p * p)).exp() * norm;
            sum += val;
            sum2 += val * val;
        }
        let mean = sum / n as f64;
        let var = (sum2 / n as f64 - mean * mean).max(0.0);
        (mean, (var / n as f64).sqrt())
    }

    #[test]
    fn reduced_measure_matches_full_space_monte_carlo() {
        let integrands: Vec<Box<dyn Fn(f64, f64, f64) -> f64>> = vec![
            Box::new(|r, p, u| (-r * r - p * p).exp() * (1.0 + u.cos().powi(2))),
            Box::new(|r, p, u| (-r * r - p * p).exp() * (r * p * u.cos()).powi(2)),
            Box::new(|r, p, u| (-1.3 * r * r - 0.7 * p * p + 0.4 * r * p * u.cos()).exp()),
            Box::new(|r, p, u| (-r * r - p * p).exp() * (p * u.sin()).powi(2)),
            Box::new(|r, p, u| (-r * r - p * p).exp() * (1.0 + r * u.cos()).powi(2)),
            Box::new(|r, p, u| (-0.9 * r * r - 1.1 * p * p).exp() * (2.0 + (r * p * u.cos()).sin())),
            Box::new(|r, p, u| (-r * r - p * p).exp() * (1.0 + r * r * p * p * u.sin().powi(2))),
            Box::new(|r, p, u| (-r * r - p * p - 0.5 * r * p * u.cos()).exp()),
            Box::new(|r, p, _| (-r * r - p * p).exp() * (1.0 + r + p)),
            Box::new(|r, p, u| (-r * r - 1.2 * p * p).exp() * (3.0 + (2.0 * u).cos())),
        ];
        for d in 2..=5usize {
            let dim = Dimension::new(d as u32).unwrap();
            let grid = ReducedGrid::new(dim, 1.0, 1.0, 64, 64, 64).unwrap();
            for (k, f) in integrands.iter().enumerate() {
                let reduced = grid.integrate(f);
                let (mc, se) = mc_full_space(d, 200_000, 1000 + k as u64, f);
                assert!(
                    (reduced - mc).abs() <= 3.0 * se + 1e-12,
                    "d={d} integrand {k}: reduced {reduced} mc {mc} ± {se}"
                );
            }
        }
    }

    #[test]
    fn converged_grid_reports_change() {
        let dim = Dimension::new(3).unwrap();
        let (v, change) =
            ReducedGrid::integrate_converged(dim, 1.0, 1.0, 8, 1e-10, |r, p, _| (-r * r - p * p).exp()).unwrap();
        assert!((v - PI.powi(3)).abs() < 1e-9);
        assert!(change <= 1e-10 * v);
    }
}
