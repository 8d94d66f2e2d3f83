//! Importance-sampled Monte Carlo over the full `2D`-dimensional phase space.
//!
//! The proposal is a mixture of the terms' own Gaussians: term `k` is drawn
//! with probability `∝ |amp_k| Z_k`, where `Z_k` is the integral of
//! `exp(E_k)`, and each `(x_j, p_j)` pair then from the matching bivariate
//! normal. Since `|W| ≤ Σ |amp_k| exp(E_k)`, the weights `W/g` are bounded.

use rand::distr::weighted::WeightedIndex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::{PhaseReport, ATOMIC_UNITS};
use crate::error::{Error, Result};
use crate::wigner::WignerGaussianSum;

pub const MIN_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Serialize)]
pub struct McReport {
    pub report: PhaseReport,
    pub norm: f64,
    pub norm_se: f64,
    #[serde(rename = "T_total_se")]
    pub t_total_se: f64,
    #[serde(rename = "T_rad_se")]
    pub t_rad_se: f64,
    #[serde(rename = "T_ang_se")]
    pub t_ang_se: f64,
    #[serde(rename = "Lambda2_se")]
    pub lambda2_se: f64,
    pub samples: usize,
    pub seed: u64,
}

struct Component {
    /// `exp(E)` normalizer over the full space.
    log_z: f64,
    r2: f64,
    p2: f64,
    rp: f64,
    /// Cholesky factor of the pair covariance.
    l11: f64,
    l21: f64,
    l22: f64,
}

impl Component {
    /// `det` is `r2 p2 − rp²/4`, passed in because free flight leaves it
    /// unchanged and the unsheared form gives it without cancellation.
    fn new(r2: f64, p2: f64, rp: f64, det: f64, d: usize) -> Result<Self> {
        // exp(r2 x² + p2 q² + rp x q) per pair; precision [[−2r2, −rp], [−rp, −2p2]]
        if !(r2 < 0.0 && p2 < 0.0 && det > 0.0 && det.is_finite()) {
            return Err(Error::DegenerateProposal(format!(
                "term exponent (r2={r2}, p2={p2}, rp={rp}) is not negative definite"
            )));
        }
        let prec_det = 4.0 * det;
        let (sxx, sxp) = (-2.0 * p2 / prec_det, rp / prec_det);
        let l11 = sxx.sqrt();
        let l21 = sxp / l11;
        // spp − l21² = det Σ / sxx
        let l22 = (1.0 / (prec_det * sxx)).sqrt();
        if !(l22 > 0.0) {
            return Err(Error::DegenerateProposal("singular pair covariance".into()));
        }
        let log_z = d as f64 * (std::f64::consts::PI.ln() - 0.5 * det.ln());
        Ok(Self { log_z, r2, p2, rp, l11, l21, l22 })
    }
}

struct Accumulator {
    sum: f64,
    sum_sq: f64,
}

impl Accumulator {
    fn push(&mut self, v: f64) {
        self.sum += v;
        self.sum_sq += v * v;
    }

    fn mean_se(&self, n: usize) -> (f64, f64) {
        let nf = n as f64;
        let mean = self.sum / nf;
        let var = (self.sum_sq / nf - mean * mean).max(0.0) * nf / (nf - 1.0);
        (mean, (var / nf).sqrt())
    }
}

/// Estimates `∫∫ W`, the kinetic decomposition and `⟨Λ²⟩` with standard
/// errors from `n_samples` draws.
pub fn mc_oracle(w: &WignerGaussianSum, n_samples: usize, seed: u64) -> Result<McReport> {
    if n_samples < MIN_SAMPLES {
        return Err(Error::Contract(format!("Monte Carlo needs at least {MIN_SAMPLES} samples, got {n_samples}")));
    }
    let d = w.dim().as_usize();
    let comps = w
        .terms()
        .iter()
        .zip(w.base_terms())
        .map(|(t, t0)| {
            let e0 = t0.exponent;
            let det = e0.r2 * e0.p2 - 0.25 * e0.rp * e0.rp;
            Component::new(t.exponent.r2, t.exponent.p2, t.exponent.rp, det, d)
        })
        .collect::<Result<Vec<_>>>()?;
    let log_weights: Vec<f64> = w.terms().iter().zip(&comps).map(|(t, c)| t.amplitude.abs().ln() + c.log_z).collect();
    let top = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return Err(Error::DegenerateProposal("all term amplitudes vanish".into()));
    }
    let weights: Vec<f64> = log_weights.iter().map(|lw| (lw - top).exp()).collect();
    let total: f64 = weights.iter().sum();
    let picker = WeightedIndex::new(&weights).map_err(|e| Error::DegenerateProposal(e.to_string()))?;
    // log of the proposal normalizer: g = Σ_k (w_k/total) exp(E_k)/Z_k
    let mix: Vec<f64> = weights.iter().zip(&comps).map(|(wk, c)| (wk / total) * (-c.log_z).exp()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc: Vec<Accumulator> = (0..5).map(|_| Accumulator { sum: 0.0, sum_sq: 0.0 }).collect();
    let mut x = vec![0.0; d];
    let mut p = vec![0.0; d];
    for _ in 0..n_samples {
        let k = picker.sample(&mut rng);
        let c = &comps[k];
        for j in 0..d {
            let z1: f64 = rng.sample(StandardNormal);
            let z2: f64 = rng.sample(StandardNormal);
            x[j] = c.l11 * z1;
            p[j] = c.l21 * z1 + c.l22 * z2;
        }
        let r_sq: f64 = x.iter().map(|v| v * v).sum();
        let p_sq: f64 = p.iter().map(|v| v * v).sum();
        let rp: f64 = x.iter().zip(&p).map(|(a, b)| a * b).sum();
        let g: f64 = comps.iter().zip(&mix).map(|(c, m)| m * (c.r2 * r_sq + c.p2 * p_sq + c.rp * rp).exp()).sum();
        let ratio = w.terms().iter().map(|t| t.eval(r_sq, p_sq, rp)).sum::<f64>() / g;
        let radial = if r_sq > 0.0 { rp * rp / r_sq } else { 0.0 };
        acc[0].push(ratio);
        acc[1].push(ratio * 0.5 * p_sq);
        acc[2].push(ratio * 0.5 * radial);
        acc[3].push(ratio * 0.5 * (p_sq - radial));
        acc[4].push(ratio * (r_sq * p_sq - rp * rp));
    }
    let stats: Vec<(f64, f64)> = acc.iter().map(|a| a.mean_se(n_samples)).collect();
    let report = PhaseReport {
        state_id: String::new(),
        picture: "phase-space-monte-carlo".into(),
        d: w.dim().get(),
        t_over_tau: None,
        t_total: stats[1].0,
        t_rad: stats[2].0,
        t_ang: stats[3].0,
        lambda2: stats[4].0,
        units: ATOMIC_UNITS.into(),
        error_estimate: stats[1].1,
    };
    Ok(McReport {
        report,
        norm: stats[0].0,
        norm_se: stats[0].1,
        t_total_se: stats[1].1,
        t_rad_se: stats[2].1,
        t_ang_se: stats[3].1,
        lambda2_se: stats[4].1,
        samples: n_samples,
        seed,
    })
}
