//! Rayleigh–Ritz fits of the `D`-dimensional Coulomb ground state on
//! isotropic Gaussians.
//!
//! Atomic units ħ = M = a₀ = 1 with `V = −1/r`, so the exact ground state is
//! `exp(−r/n₀)` with energy `−1/(2n₀²)`, `n₀ = (D−1)/2`.

mod nelder_mead;

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use nelder_mead::{minimize, Minimum, NelderMeadOptions};

use crate::error::{Error, Result};
use crate::geometry::{gamma, solid_angle, Dimension};
use crate::phasespace::{phase_report, PhaseQuadrature, PhaseReport};
use crate::quadrature::{integrate_half_line, AdaptiveOptions};
use crate::states::{HydrogenicState, RadialGaussianState, RadialState};
use crate::wigner::wigner_of_state;

/// Largest accepted condition number of the unit-diagonal overlap matrix.
pub const MAX_CONDITION: f64 = 1e12;
/// Overlap eigenvalues below this fraction of the largest are discarded.
pub const EIGEN_FLOOR: f64 = 1e-12;
pub const MAX_GAUSSIANS: usize = 32;

/// Overlap, kinetic and Coulomb matrices over `exp(−a_i r²)`.
#[derive(Debug, Clone)]
pub struct CoulombMatrices {
    pub overlap: DMatrix<f64>,
    pub kinetic: DMatrix<f64>,
    pub potential: DMatrix<f64>,
}

impl CoulombMatrices {
    pub fn hamiltonian(&self) -> DMatrix<f64> {
        &self.kinetic + &self.potential
    }
}

/// `S_ij = (π/s)^{D/2}`, `T_ij = D a_i a_j/s · S_ij`,
/// `V_ij = −S_D Γ((D−1)/2) / (2 s^{(D−1)/2})` with `s = a_i + a_j`.
pub fn coulomb_matrices(d: Dimension, exponents: &[f64]) -> Result<CoulombMatrices> {
    if exponents.is_empty() {
        return Err(Error::Contract("empty Gaussian basis".into()));
    }
    if let Some(a) = exponents.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
        return Err(Error::Domain(format!("Gaussian exponent must be positive and finite, got {a}")));
    }
    let n = exponents.len();
    let df = d.as_f64();
    let sd = solid_angle(d.get())?;
    let g = gamma(0.5 * (df - 1.0));
    let overlap = DMatrix::from_fn(n, n, |i, j| (PI / (exponents[i] + exponents[j])).powf(0.5 * df));
    let kinetic = DMatrix::from_fn(n, n, |i, j| {
        let s = exponents[i] + exponents[j];
        df * exponents[i] * exponents[j] / s * overlap[(i, j)]
    });
    let potential = DMatrix::from_fn(n, n, |i, j| {
        let s = exponents[i] + exponents[j];
        -sd * g / (2.0 * s.powf(0.5 * (df - 1.0)))
    });
    let m = CoulombMatrices { overlap, kinetic, potential };
    let cond = overlap_condition(&m.overlap);
    if !(cond <= MAX_CONDITION) {
        return Err(Error::IllConditioned { condition: cond });
    }
    Ok(m)
}

/// Condition number of `S` after scaling it to unit diagonal.
pub fn overlap_condition(s: &DMatrix<f64>) -> f64 {
    let n = s.nrows();
    let scaled = DMatrix::from_fn(n, n, |i, j| s[(i, j)] / (s[(i, i)] * s[(j, j)]).sqrt());
    let eig = SymmetricEigen::new(scaled).eigenvalues;
    let max = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    if min <= 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Lowest root of `H c = E S c` by symmetric orthogonalization. Returns the
/// energy and coefficients normalized so that `cᵀ S c = 1`.
pub fn solve_ground(m: &CoulombMatrices) -> Result<(f64, DVector<f64>)> {
    let s_eig = SymmetricEigen::new(m.overlap.clone());
    let top = s_eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let keep: Vec<usize> = (0..s_eig.eigenvalues.len()).filter(|&k| s_eig.eigenvalues[k] > EIGEN_FLOOR * top).collect();
    if keep.is_empty() {
        return Err(Error::IllConditioned { condition: f64::INFINITY });
    }
    let n = m.overlap.nrows();
    let x = DMatrix::from_fn(n, keep.len(), |i, k| {
        let idx = keep[k];
        s_eig.eigenvectors[(i, idx)] / s_eig.eigenvalues[idx].sqrt()
    });
    let h = x.transpose() * m.hamiltonian() * &x;
    let h_eig = SymmetricEigen::new(h);
    let (lowest, energy) =
        h_eig.eigenvalues.iter().copied().enumerate().min_by(|a, b| a.1.total_cmp(&b.1)).expect("non-empty");
    let mut c = &x * h_eig.eigenvectors.column(lowest);
    // fix the overall sign so that ψ(0) > 0
    if c.sum() < 0.0 {
        c = -c;
    }
    Ok((energy, c))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentScheme {
    /// `a_i = α β^i`, `(α, β)` optimized.
    EvenTempered,
    /// All exponents optimized, starting from the even-tempered optimum.
    FullyOptimized,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitConfig {
    pub d: Dimension,
    pub n_gauss: usize,
    pub scheme: ExponentScheme,
    /// Extra random starts for the `(α, β)` search.
    pub starts: usize,
    pub seed: u64,
    #[serde(skip)]
    pub optimizer: NelderMeadOptions,
}

impl FitConfig {
    pub fn new(d: Dimension, n_gauss: usize) -> Self {
        Self {
            d,
            n_gauss,
            scheme: ExponentScheme::EvenTempered,
            starts: 4,
            seed: 2024,
            optimizer: NelderMeadOptions::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_gauss == 0 || self.n_gauss > MAX_GAUSSIANS {
            return Err(Error::Domain(format!("n_gauss must be in 1..={MAX_GAUSSIANS}, got {}", self.n_gauss)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    #[serde(rename = "D")]
    pub d: u32,
    pub n_gauss: usize,
    pub scheme: ExponentScheme,
    pub energy: f64,
    pub exact_energy: f64,
    pub overlap_with_exact: f64,
    pub exponents: Vec<f64>,
    pub coeffs: Vec<f64>,
    /// Even-tempered optimum that produced (or seeded) this fit.
    pub even_tempered: EvenTempered,
    pub evaluations: usize,
    pub seed: u64,
    #[serde(skip)]
    pub state: RadialGaussianState,
}

/// `a_i = α β^i`; `β` is absent for a single Gaussian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvenTempered {
    pub alpha: f64,
    pub beta: Option<f64>,
}

fn even_tempered(alpha: f64, beta: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| alpha * beta.powi(i as i32)).collect()
}

/// `(ln α, ln(β−1))` parameterization keeps `α > 0` and `β > 1`.
fn decode(x: &[f64]) -> (f64, f64) {
    (x[0].exp(), 1.0 + x.get(1).map_or(1.0, |v| v.exp()))
}

fn energy_of(d: Dimension, exponents: &[f64]) -> f64 {
    match coulomb_matrices(d, exponents).and_then(|m| solve_ground(&m)) {
        Ok((e, _)) => e,
        Err(_) => f64::INFINITY,
    }
}

/// Best `(α, β)` for `n` even-tempered Gaussians from a set of starts.
fn optimize_even_tempered(d: Dimension, n: usize, starts: &[(f64, f64)], opts: &NelderMeadOptions) -> (Minimum, usize) {
    let mut best: Option<Minimum> = None;
    let mut evals = 0;
    for &(alpha, beta) in starts {
        let x0: Vec<f64> = if n == 1 { vec![alpha.ln()] } else { vec![alpha.ln(), (beta - 1.0).ln()] };
        let m = minimize(
            |x| {
                let (a, b) = decode(x);
                energy_of(d, &even_tempered(a, b, n))
            },
            &x0,
            opts,
        );
        evals += m.evaluations;
        if best.as_ref().is_none_or(|b| m.f < b.f) {
            best = Some(m);
        }
    }
    (best.expect("at least one start"), evals)
}

fn overlap_with_exact(state: &RadialGaussianState) -> Result<f64> {
    let d = state.dim();
    let exact = HydrogenicState::new(d, 1.0)?;
    let n = d.get() as i32;
    let sd = solid_angle(d.get())?;
    let est = integrate_half_line(
        |r| [state.radial(r) * exact.radial(r) * r.powi(n - 1)],
        exact.length_scale(),
        &AdaptiveOptions { abs_tol: 1e-15, rel_tol: 1e-12, ..AdaptiveOptions::default() },
    )?;
    Ok(sd * est.value[0])
}

fn finish(
    cfg: &FitConfig,
    exponents: Vec<f64>,
    even: EvenTempered,
    evaluations: usize,
    converged: bool,
) -> Result<FitResult> {
    let m = coulomb_matrices(cfg.d, &exponents)?;
    let (energy, c) = solve_ground(&m)?;
    let state = RadialGaussianState::new(cfg.d, c.iter().copied().collect(), exponents.clone())?.normalize()?;
    let exact = HydrogenicState::new(cfg.d, 1.0)?;
    let result = FitResult {
        d: cfg.d.get(),
        n_gauss: exponents.len(),
        scheme: cfg.scheme,
        energy,
        exact_energy: exact.energy(),
        overlap_with_exact: overlap_with_exact(&state)?,
        exponents: state.exponents().to_vec(),
        coeffs: state.coeffs().to_vec(),
        even_tempered: even,
        evaluations,
        seed: cfg.seed,
        state,
    };
    if !converged {
        return Err(Error::OptimizerNotConverged { evaluations, best_energy: energy, best: Box::new(result) });
    }
    Ok(result)
}

fn default_starts(cfg: &FitConfig, seed_from: Option<(f64, f64)>) -> Vec<(f64, f64)> {
    // spread of the exact density: exponents from ~1/(n₀ a₀)² down
    let n0 = 0.5 * (cfg.d.as_f64() - 1.0);
    let base = 0.1 / (n0 * n0);
    let mut starts = vec![(base, 2.5), (0.5 * base, 3.5)];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.starts {
        starts.push((base * rng.random_range(0.2..3.0), rng.random_range(1.6..5.0)));
    }
    if let Some(s) = seed_from {
        starts.insert(0, s);
    }
    starts
}

fn fit_with_seed(cfg: &FitConfig, seed_from: Option<(f64, f64)>) -> Result<FitResult> {
    cfg.validate()?;
    let n = cfg.n_gauss;
    let starts = default_starts(cfg, seed_from);
    let (best, mut evals) = optimize_even_tempered(cfg.d, n, &starts, &cfg.optimizer);
    let (alpha, beta) = decode(&best.x);
    let exps = even_tempered(alpha, beta, n);
    let even = EvenTempered { alpha, beta: (n > 1).then_some(beta) };
    match cfg.scheme {
        ExponentScheme::EvenTempered => finish(cfg, exps, even, evals, best.converged),
        ExponentScheme::FullyOptimized => {
            let x0: Vec<f64> = exps.iter().map(|a| a.ln()).collect();
            let opts = NelderMeadOptions { max_evals: cfg.optimizer.max_evals * n.max(2), step: 0.1, ..cfg.optimizer };
            let m = minimize(
                |x| {
                    let a: Vec<f64> = x.iter().map(|v| v.exp()).collect();
                    energy_of(cfg.d, &a)
                },
                &x0,
                &opts,
            );
            evals += m.evaluations;
            let (x, converged) = if m.f <= best.f { (m.x, m.converged) } else { (x0, m.converged) };
            let mut a: Vec<f64> = x.iter().map(|v| v.exp()).collect();
            a.sort_by(f64::total_cmp);
            finish(cfg, a, even, evals, converged)
        }
    }
}

/// Variational fit for `cfg.n_gauss` Gaussians.
pub fn fit_ground_state(cfg: &FitConfig) -> Result<FitResult> {
    fit_with_seed(cfg, None)
}

/// Fits for every `N` in `n_list` (ascending). Each even-tempered search also
/// starts from the previous optimum, whose basis is contained in the new one,
/// so the energies are non-increasing.
pub fn fit_series(base: &FitConfig, n_list: &[usize]) -> Result<Vec<FitResult>> {
    match fit_series_partial(base, n_list) {
        (fits, None) => Ok(fits),
        (_, Some(e)) => Err(e),
    }
}

/// As [`fit_series`], but on failure also returns the fits completed so far.
pub fn fit_series_partial(base: &FitConfig, n_list: &[usize]) -> (Vec<FitResult>, Option<Error>) {
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return (Vec::new(), Some(Error::Contract("N list must be strictly ascending".into())));
    }
    let mut out: Vec<FitResult> = Vec::with_capacity(n_list.len());
    let mut prev: Option<(f64, f64)> = None;
    for &n in n_list {
        let cfg = FitConfig { n_gauss: n, ..base.clone() };
        match fit_with_seed(&cfg, prev) {
            Ok(fit) => {
                let et = fit.even_tempered;
                prev = Some((et.alpha, et.beta.unwrap_or(2.5)));
                out.push(fit);
            }
            Err(e) => return (out, Some(e)),
        }
    }
    (out, None)
}

/// One row of the kinetic-energy series, energies in `ε₀ = ħ²/(M a₀²)`.
#[derive(Debug, Clone, Serialize)]
pub struct SeriesRow {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "T_total")]
    pub t_total: f64,
    #[serde(rename = "T_rad")]
    pub t_rad: f64,
    #[serde(rename = "T_ang")]
    pub t_ang: f64,
    pub energy: f64,
    #[serde(skip)]
    pub report: PhaseReport,
}

/// Phase-space kinetic decomposition of each fit in a series.
pub fn kinetic_series(fits: &[FitResult], quad: &PhaseQuadrature) -> Result<Vec<SeriesRow>> {
    fits.iter()
        .map(|fit| {
            let report = phase_report(&wigner_of_state(&fit.state), quad)?
                .with_id(format!("hydrogen_fit(D={}, N={})", fit.d, fit.n_gauss))
                .in_units(1.0, "epsilon0");
            Ok(SeriesRow {
                n: fit.n_gauss,
                t_total: report.t_total,
                t_rad: report.t_rad,
                t_ang: report.t_ang,
                energy: fit.energy,
                report,
            })
        })
        .collect()
}

/// Fits and decomposes for every `N` in `n_list` (the convergence study of
/// the classical-like kinetic energy; `D = 2` in the original figure).
pub fn fig2_series(d: Dimension, n_list: &[usize]) -> Result<(Vec<FitResult>, Vec<SeriesRow>)> {
    let fits = fit_series(&FitConfig::new(d, n_list.first().copied().unwrap_or(1)), n_list)?;
    let rows = kinetic_series(&fits, &PhaseQuadrature::default())?;
    Ok((fits, rows))
}

/// Writes `N,T_total,T_rad,T_ang,energy` with 17 significant digits.
pub fn write_series_csv<W: std::io::Write>(rows: &[SeriesRow], mut out: W) -> Result<()> {
    writeln!(out, "N,T_total,T_rad,T_ang,energy")?;
    for r in rows {
        writeln!(out, "{},{:.16e},{:.16e},{:.16e},{:.16e}", r.n, r.t_total, r.t_rad, r.t_ang, r.energy)?;
    }
    Ok(())
}
