//! Radial s-states and their operator-picture expectation values.
//!
//! Units are ħ = M = 1 throughout.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{gamma, solid_angle, Dimension};
use crate::quadrature::{integrate_half_line, AdaptiveOptions};

/// A real s-state `ψ(r) = R(r)` in `D` dimensions.
pub trait RadialState {
    fn dim(&self) -> Dimension;
    fn radial(&self, r: f64) -> f64;
    /// `dR/dr`.
    fn slope(&self, r: f64) -> f64;
    /// `d²R/dr²`.
    fn curvature(&self, r: f64) -> f64;
    /// Typical decay length, used to map the half line.
    fn length_scale(&self) -> f64;
    /// Whether `R(0) ≠ 0`.
    fn finite_at_origin(&self) -> bool;
}

/// `ψ(r) = Σ c_i exp(−a_i r²)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGaussianState {
    d: Dimension,
    coeffs: Vec<f64>,
    exponents: Vec<f64>,
}

impl RadialGaussianState {
    /// Builds the sum, merging terms with identical exponents.
    pub fn new(d: Dimension, coeffs: Vec<f64>, exponents: Vec<f64>) -> Result<Self> {
        if coeffs.len() != exponents.len() {
            return Err(Error::Contract(format!("{} coefficients for {} exponents", coeffs.len(), exponents.len())));
        }
        if coeffs.is_empty() {
            return Err(Error::Contract("a Gaussian sum needs at least one term".into()));
        }
        if let Some(a) = exponents.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(Error::Domain(format!("Gaussian exponent must be positive and finite, got {a}")));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain("Gaussian coefficients must be finite".into()));
        }
        let mut merged_c: Vec<f64> = Vec::with_capacity(coeffs.len());
        let mut merged_a: Vec<f64> = Vec::with_capacity(coeffs.len());
        for (c, a) in coeffs.into_iter().zip(exponents) {
            match merged_a.iter().position(|&b| b == a) {
                Some(k) => merged_c[k] += c,
                None => {
                    merged_c.push(c);
                    merged_a.push(a);
                }
            }
        }
        if merged_c.iter().all(|&c| c == 0.0) {
            return Err(Error::Contract("zero state".into()));
        }
        Ok(Self { d, coeffs: merged_c, exponents: merged_a })
    }

    /// Normalized minimum-uncertainty packet `exp(−α² r²/2)`.
    pub fn minimum_uncertainty(d: Dimension, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
        }
        Self::new(d, vec![1.0], vec![0.5 * alpha * alpha])?.normalize()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn pairs(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        // (c_i c_j, a_i, a_j) over all ordered pairs
        self.coeffs.iter().zip(&self.exponents).flat_map(move |(&ci, &ai)| {
            self.coeffs.iter().zip(&self.exponents).map(move |(&cj, &aj)| (ci * cj, ai, aj))
        })
    }

    /// `∫ ψ² d^Dr`, analytic.
    pub fn norm_squared(&self) -> f64 {
        let half_d = 0.5 * self.d.as_f64();
        self.pairs().map(|(cc, ai, aj)| cc * (PI / (ai + aj)).powf(half_d)).sum()
    }

    /// Rescales the coefficients so that `∫ ψ² d^Dr = 1`.
    pub fn normalize(&self) -> Result<Self> {
        let n2 = self.norm_squared();
        if !(n2.is_finite() && n2 > 0.0) {
            return Err(Error::Contract(format!("cannot normalize a state with squared norm {n2}")));
        }
        let s = n2.sqrt().recip();
        Ok(Self { d: self.d, coeffs: self.coeffs.iter().map(|c| c * s).collect(), exponents: self.exponents.clone() })
    }

    /// Replaces `a_i → s²·a_i` (a dilation by `1/s`), renormalized.
    pub fn dilated(&self, s: f64) -> Result<Self> {
        Self::new(self.d, self.coeffs.clone(), self.exponents.iter().map(|a| a * s * s).collect())?.normalize()
    }

    /// `⟨T̂⟩ = Σ c_i c_j D a_i a_j/(a_i+a_j) (π/(a_i+a_j))^{D/2}` over the norm.
    pub fn kinetic_closed_form(&self) -> f64 {
        let d = self.d.as_f64();
        let t: f64 = self
            .pairs()
            .map(|(cc, ai, aj)| {
                let s = ai + aj;
                cc * d * ai * aj / s * (PI / s).powf(0.5 * d)
            })
            .sum();
        t / self.norm_squared()
    }

    /// `⟨1/r²⟩` for `D ≥ 3`, analytic.
    pub fn inverse_square_closed_form(&self) -> Result<f64> {
        let n = self.d.get();
        if n < 3 {
            return Err(Error::Domain("closed-form ⟨1/r²⟩ needs D ≥ 3".into()));
        }
        let d = f64::from(n);
        let sd = solid_angle(n)?;
        let g = gamma(0.5 * (d - 2.0));
        let v: f64 = self.pairs().map(|(cc, ai, aj)| cc * sd * g / (2.0 * (ai + aj).powf(0.5 * (d - 2.0)))).sum();
        Ok(v / self.norm_squared())
    }

    /// `ψ(r, t)` after free evolution for time `t`.
    pub fn evolved_amplitude(&self, r: f64, t: f64, mass: f64) -> Complex64 {
        let half_d = 0.5 * self.d.as_f64();
        self.coeffs
            .iter()
            .zip(&self.exponents)
            .map(|(&c, &a)| {
                let w = Complex64::new(1.0, 2.0 * a * t / mass);
                c * w.powf(-half_d) * (-a * r * r / w).exp()
            })
            .sum()
    }

    /// `|ψ(r, t)|²` after free evolution.
    pub fn evolved_density(&self, r: f64, t: f64, mass: f64) -> f64 {
        self.evolved_amplitude(r, t, mass).norm_sqr()
    }

    /// `ψ(r)²`.
    pub fn density(&self, r: f64) -> f64 {
        self.radial(r).powi(2)
    }

    /// Momentum-space amplitude `φ(p) = (2π)^{−D/2} ∫ ψ e^{−ip·r} d^Dr`.
    pub fn momentum_amplitude(&self, p: f64) -> f64 {
        let half_d = 0.5 * self.d.as_f64();
        self.coeffs
            .iter()
            .zip(&self.exponents)
            .map(|(&c, &a)| c * (2.0 * a).powf(-half_d) * (-p * p / (4.0 * a)).exp())
            .sum()
    }

    pub fn momentum_density(&self, p: f64) -> f64 {
        self.momentum_amplitude(p).powi(2)
    }
}

impl RadialState for RadialGaussianState {
    fn dim(&self) -> Dimension {
        self.d
    }

    fn radial(&self, r: f64) -> f64 {
        self.coeffs.iter().zip(&self.exponents).map(|(c, a)| c * (-a * r * r).exp()).sum()
    }

    fn slope(&self, r: f64) -> f64 {
        self.coeffs.iter().zip(&self.exponents).map(|(c, a)| -2.0 * a * r * c * (-a * r * r).exp()).sum()
    }

    fn curvature(&self, r: f64) -> f64 {
        self.coeffs
            .iter()
            .zip(&self.exponents)
            .map(|(c, a)| c * (4.0 * a * a * r * r - 2.0 * a) * (-a * r * r).exp())
            .sum()
    }

    fn length_scale(&self) -> f64 {
        let a_min = self.exponents.iter().copied().fold(f64::INFINITY, f64::min);
        a_min.sqrt().recip()
    }

    fn finite_at_origin(&self) -> bool {
        let total: f64 = self.coeffs.iter().sum();
        let size: f64 = self.coeffs.iter().map(|c| c.abs()).sum();
        total.abs() > 1e-12 * size
    }
}

/// Coulomb ground state `N·exp(−r/(n₀ a₀))` with `n₀ = (D−1)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HydrogenicState {
    d: Dimension,
    bohr_radius: f64,
}

impl HydrogenicState {
    pub fn new(d: Dimension, bohr_radius: f64) -> Result<Self> {
        if !(bohr_radius.is_finite() && bohr_radius > 0.0) {
            return Err(Error::Domain(format!("Bohr radius must be positive, got {bohr_radius}")));
        }
        Ok(Self { d, bohr_radius })
    }

    pub fn bohr_radius(&self) -> f64 {
        self.bohr_radius
    }

    /// `n₀ = (D−1)/2`.
    pub fn principal(&self) -> f64 {
        0.5 * (self.d.as_f64() - 1.0)
    }

    fn decay_length(&self) -> f64 {
        self.principal() * self.bohr_radius
    }

    /// `N = [S_D Γ(D) (n₀a₀/2)^D]^{−1/2}`.
    pub fn normalization(&self) -> f64 {
        let d = self.d.get();
        let sd = solid_angle(d).expect("D ≥ 2");
        let half = 0.5 * self.decay_length();
        (sd * gamma(f64::from(d)) * half.powi(d as i32)).sqrt().recip()
    }

    /// Exact ground-state energy `−1/(2 n₀² a₀²)` (atomic units with `a₀ = 1`).
    pub fn energy(&self) -> f64 {
        -0.5 / self.decay_length().powi(2)
    }

    /// `⟨T̂⟩ = 1/(2 n₀² a₀²)`.
    pub fn kinetic_closed_form(&self) -> f64 {
        0.5 / self.decay_length().powi(2)
    }

    /// `⟨1/r²⟩ = 4/((D−1)(D−2) n₀² a₀²)` for `D ≥ 3`.
    pub fn inverse_square_closed_form(&self) -> Result<f64> {
        let n = self.d.get();
        if n < 3 {
            return Err(Error::Domain("⟨1/r²⟩ diverges for D = 2".into()));
        }
        let d = f64::from(n);
        Ok(4.0 / ((d - 1.0) * (d - 2.0) * self.decay_length().powi(2)))
    }
}

impl RadialState for HydrogenicState {
    fn dim(&self) -> Dimension {
        self.d
    }

    fn radial(&self, r: f64) -> f64 {
        self.normalization() * (-r / self.decay_length()).exp()
    }

    fn slope(&self, r: f64) -> f64 {
        -self.radial(r) / self.decay_length()
    }

    fn curvature(&self, r: f64) -> f64 {
        self.radial(r) / self.decay_length().powi(2)
    }

    fn length_scale(&self) -> f64 {
        self.decay_length()
    }

    fn finite_at_origin(&self) -> bool {
        true
    }
}

/// `⟨1/r²⟩`, which does not exist for `D = 2` states finite at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase", tag = "status", content = "value")]
pub enum InverseSquare {
    Finite(f64),
    Undefined,
}

impl InverseSquare {
    pub fn value(self) -> Option<f64> {
        match self {
            InverseSquare::Finite(v) => Some(v),
            InverseSquare::Undefined => None,
        }
    }
}

/// Operator-picture kinetic decomposition (units ħ = M = 1).
#[derive(Debug, Clone, Serialize)]
pub struct OperatorReport {
    pub picture: &'static str,
    #[serde(rename = "T_total")]
    pub t_total: f64,
    #[serde(rename = "T_rad")]
    pub t_rad: f64,
    #[serde(rename = "T_ang")]
    pub t_ang: f64,
    #[serde(rename = "L2")]
    pub l2: f64,
    pub inv_r2: InverseSquare,
    pub error_estimate: f64,
}

fn radial_options() -> AdaptiveOptions {
    AdaptiveOptions { abs_tol: 1e-15, rel_tol: 1e-13, ..AdaptiveOptions::default() }
}

/// `S_D ∫ R² r^{D−1} dr`, by quadrature.
pub fn norm_by_quadrature(state: &dyn RadialState) -> Result<f64> {
    let n = state.dim().get();
    let sd = solid_angle(n)?;
    let est = integrate_half_line(
        |r| [state.radial(r).powi(2) * r.powi(n as i32 - 1)],
        state.length_scale(),
        &radial_options(),
    )?;
    Ok(sd * est.value[0])
}

fn require_normalized(state: &dyn RadialState) -> Result<()> {
    let norm = norm_by_quadrature(state)?;
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::Contract(format!("state is not normalized (norm {norm})")));
    }
    Ok(())
}

/// `⟨T̂_rad⟩ = ½ S_D ∫ (dR/dr)² r^{D−1} dr` with its error estimate.
fn radial_kinetic_gradient(state: &dyn RadialState) -> Result<(f64, f64)> {
    let n = state.dim().get();
    let sd = solid_angle(n)?;
    let est = integrate_half_line(
        |r| [state.slope(r).powi(2) * r.powi(n as i32 - 1)],
        state.length_scale(),
        &radial_options(),
    )?;
    Ok((0.5 * sd * est.value[0], 0.5 * sd * est.error))
}

/// `⟨T̂_rad⟩ = −½ S_D ∫ R (R'' + (D−1)R'/r) r^{D−1} dr`, the Laplacian form.
pub fn radial_kinetic_laplacian(state: &dyn RadialState) -> Result<f64> {
    let n = state.dim().get();
    let d = f64::from(n);
    let sd = solid_angle(n)?;
    let est = integrate_half_line(
        |r| {
            let lap_r = state.curvature(r) * r.powi(n as i32 - 1) + (d - 1.0) * state.slope(r) * r.powi(n as i32 - 2);
            [state.radial(r) * lap_r]
        },
        state.length_scale(),
        &radial_options(),
    )?;
    Ok(-0.5 * sd * est.value[0])
}

/// `⟨1/r²⟩ = S_D ∫ R² r^{D−3} dr`, or `Undefined` for `D = 2` with `R(0) ≠ 0`.
pub fn inverse_square_moment(state: &dyn RadialState) -> Result<InverseSquare> {
    let n = state.dim().get();
    if n == 2 && state.finite_at_origin() {
        return Ok(InverseSquare::Undefined);
    }
    let sd = solid_angle(n)?;
    let est = integrate_half_line(
        |r| [state.radial(r).powi(2) * r.powi(n as i32 - 3)],
        state.length_scale(),
        &radial_options(),
    )?;
    Ok(InverseSquare::Finite(sd * est.value[0]))
}

/// `⟨ħ²/(4M r²)⟩`, or `Undefined` where `⟨1/r²⟩` does not exist.
pub fn expect_inv_r2(state: &dyn RadialState) -> Result<InverseSquare> {
    Ok(match inverse_square_moment(state)? {
        InverseSquare::Finite(v) => InverseSquare::Finite(0.25 * v),
        InverseSquare::Undefined => InverseSquare::Undefined,
    })
}

/// Operator-picture expectations for a normalized s-state.
pub fn op_kinetic_report(state: &dyn RadialState) -> Result<OperatorReport> {
    require_normalized(state)?;
    let (t_rad, err) = radial_kinetic_gradient(state)?;
    Ok(OperatorReport {
        picture: "operator",
        t_total: t_rad,
        t_rad,
        t_ang: 0.0,
        l2: 0.0,
        inv_r2: inverse_square_moment(state)?,
        error_estimate: err,
    })
}
