//! Analytic Wigner functions of Gaussian-sum s-states.
//!
//! Every term has the shape `amplitude · exp(E(r,p)) · cos(Φ(r,p))` where `E`
//! and `Φ` are real quadratic forms in `(r², p², r·p)`. Cross terms between
//! different exponents carry the cosine; diagonal terms have `Φ = 0`.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Dimension;
use crate::states::{RadialGaussianState, RadialState};

/// `r2·r² + p2·p² + rp·(r·p)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct QuadForm {
    pub r2: f64,
    pub p2: f64,
    pub rp: f64,
}

impl QuadForm {
    pub fn new(r2: f64, p2: f64, rp: f64) -> Self {
        Self { r2, p2, rp }
    }

    #[inline]
    pub fn eval(&self, r_sq: f64, p_sq: f64, r_dot_p: f64) -> f64 {
        self.r2 * r_sq + self.p2 * p_sq + self.rp * r_dot_p
    }

    /// The form after substituting `r → r − s·p`.
    pub fn sheared(&self, s: f64) -> Self {
        Self { r2: self.r2, p2: self.p2 + s * s * self.r2 - s * self.rp, rp: self.rp - 2.0 * s * self.r2 }
    }

    pub fn is_zero(&self) -> bool {
        self.r2 == 0.0 && self.p2 == 0.0 && self.rp == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WignerTerm {
    pub amplitude: f64,
    /// Exponent; negative definite.
    pub exponent: QuadForm,
    /// Cosine argument; zero for diagonal terms.
    pub phase: QuadForm,
}

impl WignerTerm {
    #[inline]
    pub fn eval(&self, r_sq: f64, p_sq: f64, r_dot_p: f64) -> f64 {
        let e = self.amplitude * self.exponent.eval(r_sq, p_sq, r_dot_p).exp();
        if self.phase.is_zero() {
            e
        } else {
            e * self.phase.eval(r_sq, p_sq, r_dot_p).cos()
        }
    }

    fn sheared(&self, s: f64) -> Self {
        Self { amplitude: self.amplitude, exponent: self.exponent.sheared(s), phase: self.phase.sheared(s) }
    }
}

/// Wigner function `W(r, p)` of a Gaussian-sum s-state, ħ = 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerGaussianSum {
    d: Dimension,
    /// Terms before any free flight.
    base: Vec<WignerTerm>,
    terms: Vec<WignerTerm>,
    /// Accumulated free-flight shift `Σ t/M`.
    shift: f64,
}

impl WignerGaussianSum {
    pub fn from_terms(d: Dimension, terms: Vec<WignerTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Contract("Wigner sum without terms".into()));
        }
        Ok(Self { d, base: terms.clone(), terms, shift: 0.0 })
    }

    pub fn dim(&self) -> Dimension {
        self.d
    }

    pub fn terms(&self) -> &[WignerTerm] {
        &self.terms
    }

    /// The terms before free flight; `terms()` is these sheared by `shift()`.
    pub fn base_terms(&self) -> &[WignerTerm] {
        &self.base
    }

    /// Total `t/M` applied by [`evolve_free`](Self::evolve_free) so far.
    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// Free Liouville flow: `W_t(r, p) = W(r − t p/M, p)`.
    pub fn evolve_free(&self, t: f64, mass: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::Domain(format!("mass must be positive, got {mass}")));
        }
        if !t.is_finite() {
            return Err(Error::Domain("time must be finite".into()));
        }
        let shift = self.shift + t / mass;
        Ok(Self {
            d: self.d,
            base: self.base.clone(),
            terms: self.base.iter().map(|w| w.sheared(shift)).collect(),
            shift,
        })
    }

    /// `W` at hyperradius `r`, momentum magnitude `p` and angle `u` between them.
    pub fn eval(&self, r: f64, p: f64, u: f64) -> f64 {
        let (r_sq, p_sq, rp) = (r * r, p * p, r * p * u.cos());
        self.terms.iter().map(|w| w.eval(r_sq, p_sq, rp)).sum()
    }

    /// `W` at a Cartesian phase-space point.
    pub fn eval_full(&self, x: &[f64], p: &[f64]) -> Result<f64> {
        let n = self.d.as_usize();
        if x.len() != n || p.len() != n {
            return Err(Error::Contract(format!("point has wrong dimension for D = {n}")));
        }
        let r_sq = x.iter().map(|v| v * v).sum();
        let p_sq = p.iter().map(|v| v * v).sum();
        let rp = x.iter().zip(p).map(|(a, b)| a * b).sum();
        Ok(self.terms.iter().map(|w| w.eval(r_sq, p_sq, rp)).sum())
    }
}

/// Analytic Wigner function of `ψ = Σ c_i exp(−a_i r²)`.
///
/// With `A = a_i + a_j` and `δ = a_i − a_j`, the pair `(i, j)` contributes
/// `c_i c_j (πA)^{−D/2} exp(−4a_i a_j r²/A − p²/A − 2iδ r·p/A)`; the `(j, i)`
/// partner is its conjugate, so each unordered pair gives a cosine.
pub fn wigner_of_state(state: &RadialGaussianState) -> WignerGaussianSum {
    let d = state.dim();
    let half_d = 0.5 * d.as_f64();
    let (c, a) = (state.coeffs(), state.exponents());
    let mut terms = Vec::with_capacity(c.len() * (c.len() + 1) / 2);
    for i in 0..c.len() {
        for j in i..c.len() {
            let big = a[i] + a[j];
            let delta = a[i] - a[j];
            let weight = if i == j { 1.0 } else { 2.0 };
            terms.push(WignerTerm {
                amplitude: weight * c[i] * c[j] * (PI * big).powf(-half_d),
                exponent: QuadForm::new(-4.0 * a[i] * a[j] / big, -1.0 / big, 0.0),
                phase: QuadForm::new(0.0, 0.0, if i == j { 0.0 } else { 2.0 * delta / big }),
            });
        }
    }
    WignerGaussianSum { d, base: terms.clone(), terms, shift: 0.0 }
}

/// One sample of a grid export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridRow {
    pub r: f64,
    pub p: f64,
    pub u: f64,
    #[serde(rename = "W")]
    pub w: f64,
}

/// Evaluates `w` on the tensor grid, row-major over `(r, p, u)`.
pub fn grid_export(w: &WignerGaussianSum, r_grid: &[f64], p_grid: &[f64], u_values: &[f64]) -> Result<Vec<GridRow>> {
    let all = r_grid.iter().chain(p_grid).chain(u_values);
    if let Some(v) = all.clone().find(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("non-finite grid coordinate {v}")));
    }
    if r_grid.iter().chain(p_grid).any(|v| *v < 0.0) {
        return Err(Error::Domain("r and p grid values must be non-negative".into()));
    }
    if u_values.iter().any(|u| !(0.0..=PI).contains(u)) {
        return Err(Error::Domain("u values must lie in [0, π]".into()));
    }
    let mut rows = Vec::with_capacity(r_grid.len() * p_grid.len() * u_values.len());
    for &r in r_grid {
        for &p in p_grid {
            for &u in u_values {
                rows.push(GridRow { r, p, u, w: w.eval(r, p, u) });
            }
        }
    }
    Ok(rows)
}

/// Writes rows as CSV with header `r,p,u,W` and 17 significant digits.
pub fn write_grid_csv<W: Write>(rows: &[GridRow], mut out: W) -> Result<()> {
    writeln!(out, "r,p,u,W")?;
    for row in rows {
        writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", row.r, row.p, row.u, row.w)?;
    }
    Ok(())
}

/// `n` equally spaced points on `[0, max]` (a single `0` when `n = 1`).
pub fn linspace(max: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|k| max * k as f64 / (n - 1) as f64).collect(),
    }
}
