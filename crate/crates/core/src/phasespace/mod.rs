//! Classical-like phase-space averages of Wigner functions.
//!
//! For an s-state every average needed here is an integral over the reduced
//! coordinates `(r, p, u)`. Three independent routes are provided: polar
//! quadrature with the radial direction done analytically ([`phase_report`]),
//! the plain tensor grid of [`ReducedGrid`], and closed-form complex Gaussian
//! moments ([`phase_report_analytic`]). [`mc_oracle`] samples the full
//! `2D`-dimensional space.

mod mc;
mod polar;

use num_complex::Complex64;
use serde::Serialize;

pub use mc::{mc_oracle, McReport};
pub use polar::{polar_moments, PhaseQuadrature};

use crate::error::{Error, Result};
use crate::geometry::{solid_angle, Dimension, ReducedGrid};
use crate::quadrature::{integrate_half_line, AdaptiveOptions};
use crate::states::{InverseSquare, OperatorReport};
use crate::wigner::{WignerGaussianSum, WignerTerm};

/// Raw averages over `W` (ħ = M = 1).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct PhaseMoments {
    /// `∫∫ W`.
    pub norm: f64,
    /// `⟨p²⟩`.
    pub p2: f64,
    /// `⟨(p cos u)²⟩`.
    pub p2_radial: f64,
    /// `⟨(p sin u)²⟩`.
    pub p2_angular: f64,
    /// `⟨Λ²⟩ = ⟨(r p sin u)²⟩`.
    pub lambda2: f64,
    pub error: f64,
}

/// Picture-tagged kinetic decomposition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseReport {
    pub state_id: String,
    pub picture: String,
    #[serde(rename = "D")]
    pub d: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_over_tau: Option<f64>,
    #[serde(rename = "T_total")]
    pub t_total: f64,
    #[serde(rename = "T_rad")]
    pub t_rad: f64,
    #[serde(rename = "T_ang")]
    pub t_ang: f64,
    #[serde(rename = "Lambda2")]
    pub lambda2: f64,
    pub units: String,
    pub error_estimate: f64,
}

pub const ATOMIC_UNITS: &str = "hbar=M=1";

impl PhaseReport {
    pub fn from_moments(d: Dimension, m: &PhaseMoments) -> Self {
        Self {
            state_id: String::new(),
            picture: "phase-space".into(),
            d: d.get(),
            t_over_tau: None,
            t_total: 0.5 * m.p2,
            t_rad: 0.5 * m.p2_radial,
            t_ang: 0.5 * m.p2_angular,
            lambda2: m.lambda2,
            units: ATOMIC_UNITS.into(),
            error_estimate: m.error,
        }
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.state_id = id.into();
        self
    }

    pub fn with_time(mut self, t_over_tau: f64) -> Self {
        self.t_over_tau = Some(t_over_tau);
        self
    }

    /// Expresses the energies in units of `energy_unit` (given in ħ = M = 1
    /// units); `Lambda2` stays in units of ħ².
    pub fn in_units(mut self, energy_unit: f64, tag: &str) -> Self {
        self.t_total /= energy_unit;
        self.t_rad /= energy_unit;
        self.t_ang /= energy_unit;
        self.error_estimate /= energy_unit;
        self.units = tag.into();
        self
    }
}

/// Phase-space report by polar quadrature in the `(r, p)` plane.
pub fn phase_report(w: &WignerGaussianSum, cfg: &PhaseQuadrature) -> Result<PhaseReport> {
    Ok(PhaseReport::from_moments(w.dim(), &polar_moments(w, cfg)?))
}

/// Complex Gaussian parameters of one term: `amp·exp(−a r² − b p² + c r·p)`,
/// real part taken at the end.
struct ComplexTerm {
    amp: f64,
    a: Complex64,
    b: Complex64,
    c: Complex64,
}

impl ComplexTerm {
    fn new(t: &WignerTerm) -> Self {
        Self {
            amp: t.amplitude,
            a: -Complex64::new(t.exponent.r2, t.phase.r2),
            b: -Complex64::new(t.exponent.p2, t.phase.p2),
            c: Complex64::new(t.exponent.rp, t.phase.rp),
        }
    }
}

/// Exact moments from the complex Gaussian integrals of each term.
pub fn analytic_moments(w: &WignerGaussianSum) -> PhaseMoments {
    let d = w.dim().as_f64();
    let pi = Complex64::from(std::f64::consts::PI);
    let mut m = PhaseMoments::default();
    for (t, t0) in w.terms().iter().zip(w.base_terms()) {
        let ComplexTerm { amp, a: _, b, c } = ComplexTerm::new(t);
        // integrate p first, then r; 4ab − c² is unchanged by free flight,
        // so it comes from the unsheared form
        let base_form = ComplexTerm::new(t0);
        let det = 4.0 * base_form.a * base_form.b - base_form.c * base_form.c;
        let a_eff = det / (4.0 * b);
        let base = (pi / b).powf(0.5 * d) * (pi / a_eff).powf(0.5 * d) * amp;
        let shift = c * c / (4.0 * b * b) * d / (2.0 * a_eff);
        m.norm += base.re;
        m.p2 += (base * (d / (2.0 * b) + shift)).re;
        m.p2_radial += (base * (1.0 / (2.0 * b) + shift)).re;
        m.p2_angular += (base * ((d - 1.0) / (2.0 * b))).re;
        m.lambda2 += (base * ((d - 1.0) / (2.0 * b) * d / (2.0 * a_eff))).re;
    }
    m
}

pub fn phase_report_analytic(w: &WignerGaussianSum) -> PhaseReport {
    PhaseReport::from_moments(w.dim(), &analytic_moments(w))
}

/// Characteristic widths `(r, p)` of the broadest term, used to scale grids.
pub(crate) fn widths(w: &WignerGaussianSum) -> (f64, f64) {
    let mut r_max: f64 = 0.0;
    let mut p_max: f64 = 0.0;
    for t in w.terms() {
        let e = t.exponent;
        let det = 4.0 * e.r2 * e.p2 - e.rp * e.rp;
        r_max = r_max.max((-2.0 * e.p2 / det).sqrt());
        p_max = p_max.max((-2.0 * e.r2 / det).sqrt());
    }
    (r_max, p_max)
}

/// Moments on a fixed tensor grid.
pub fn grid_moments(w: &WignerGaussianSum, grid: &ReducedGrid) -> PhaseMoments {
    let norm = grid.integrate(|r, p, u| w.eval(r, p, u));
    let p2 = grid.integrate(|r, p, u| p * p * w.eval(r, p, u));
    let p2_radial = grid.integrate(|r, p, u| (p * u.cos()).powi(2) * w.eval(r, p, u));
    let p2_angular = grid.integrate(|r, p, u| (p * u.sin()).powi(2) * w.eval(r, p, u));
    let lambda2 = grid.integrate(|r, p, u| (r * p * u.sin()).powi(2) * w.eval(r, p, u));
    PhaseMoments { norm, p2, p2_radial, p2_angular, lambda2, error: f64::NAN }
}

/// Moments on tensor grids of doubling order until successive results agree
/// to `rel_tol` (orders 16 → 256).
pub fn tensor_moments(w: &WignerGaussianSum, rel_tol: f64) -> Result<PhaseMoments> {
    let (rs, ps) = widths(w);
    let d = w.dim();
    let mut prev = grid_moments(w, &ReducedGrid::new(d, rs, ps, 16, 16, 16)?);
    let mut n = 32;
    loop {
        let next = grid_moments(w, &ReducedGrid::new(d, rs, ps, n, n, n)?);
        let pairs = [
            (prev.norm, next.norm),
            (prev.p2, next.p2),
            (prev.p2_radial, next.p2_radial),
            (prev.p2_angular, next.p2_angular),
            (prev.lambda2, next.lambda2),
        ];
        let scale = pairs.iter().fold(0.0f64, |m, (_, b)| m.max(b.abs()));
        let change = pairs.iter().fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if change <= rel_tol * scale {
            return Ok(PhaseMoments { error: change, ..next });
        }
        if n >= 256 {
            return Err(Error::QuadratureNotConverged {
                what: "reduced tensor grid".into(),
                estimate: change,
                tolerance: rel_tol * scale,
            });
        }
        prev = next;
        n *= 2;
    }
}

/// Closed-form free-particle decomposition in three dimensions, from
/// `T_rad = ε(3/4 − 1/(2(s²+1)))`, `T_ang = ε/(2(s²+1))`, `s = t/τ`,
/// `ε = α²ħ²/M`, `τ = M/(α²ħ)`. Energies in ħ = M = 1 units.
pub fn phase_report_closed_form_free(alpha: f64, t: f64, mass: f64, d: Dimension) -> Result<PhaseReport> {
    if d.get() != 3 {
        return Err(Error::Domain(format!("closed form available for D = 3 only, got D = {d}")));
    }
    if !(alpha > 0.0 && mass > 0.0 && alpha.is_finite() && mass.is_finite() && t.is_finite()) {
        return Err(Error::Domain("alpha and mass must be positive, t finite".into()));
    }
    let eps = alpha * alpha / mass;
    let s = t / (mass / (alpha * alpha));
    let t_ang = eps / (2.0 * (s * s + 1.0));
    Ok(PhaseReport {
        state_id: format!("free_gaussian(alpha={alpha})"),
        picture: "phase-space-closed-form".into(),
        d: 3,
        t_over_tau: Some(s),
        t_total: 0.75 * eps,
        t_rad: 0.75 * eps - t_ang,
        t_ang,
        lambda2: 1.5,
        units: ATOMIC_UNITS.into(),
        error_estimate: 0.0,
    })
}

/// `(T_rad, T_ang)` in the phase-space picture obtained from operator
/// expectations by adding the Weyl offsets `∓(D−1)(D−2)⟨1/r²⟩/8`.
///
/// Refuses `D = 2`, where the offset vanishes formally but `⟨1/r²⟩` does not
/// exist for states finite at the origin; use the direct integrals instead.
pub fn kinetic_split_from_operator(d: Dimension, op: &OperatorReport) -> Result<(f64, f64)> {
    let n = d.get();
    if n == 2 {
        return Err(Error::Domain(
            "the operator-offset route is not used for D = 2; integrate over phase space instead".into(),
        ));
    }
    let inv_r2 = match op.inv_r2 {
        InverseSquare::Finite(v) => v,
        InverseSquare::Undefined => return Err(Error::Domain("⟨1/r²⟩ is undefined for this state".into())),
    };
    let nf = f64::from(n);
    let offset = (nf - 1.0) * (nf - 2.0) * inv_r2 / 8.0;
    Ok((op.t_rad - offset, op.t_ang + offset))
}

/// `∫W d^Dp` at radius `r`, by quadrature.
///
/// Each term is done on its own. With `z` the momentum component along `r`
/// and `ρ` its length across, a term is a product of a complex Gaussian in
/// `z` and one in `ρ`, so two one-dimensional integrals centred on the
/// term's peak replace the nested `(p, u)` integral.
pub fn position_marginal(w: &WignerGaussianSum, r: f64) -> Result<f64> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::Domain(format!("radius must be non-negative, got {r}")));
    }
    let n = w.dim().get();
    let across = solid_angle(n - 1)?;
    let across_power = n as i32 - 2;
    let mut total = 0.0;
    for t in w.terms() {
        let q = Complex64::new(t.exponent.p2, t.phase.p2);
        let lin = Complex64::new(t.exponent.rp, t.phase.rp) * r;
        if !(q.re < 0.0) {
            return Err(Error::Domain(format!("Wigner term not decaying in momentum (p2 = {})", q.re)));
        }
        let width = (-0.5 / q.re).sqrt();
        let peak = -t.exponent.rp * r / (2.0 * q.re);
        // moduli of the two integrals are of order width and width^(D-1)
        let opts =
            |size: f64| AdaptiveOptions { abs_tol: 1e-12 * size, rel_tol: 1e-12, max_panels: 4000, initial_panels: 4 };
        // expanded about the peak, where the linear term is purely a phase
        let slope = Complex64::new(0.0, (2.0 * q * peak + lin).im);
        let gauss = |x: f64| {
            let v = (q * x * x + slope * x).exp();
            [v.re, v.im]
        };
        let ahead = integrate_half_line(gauss, width, &opts(width))?;
        let behind = integrate_half_line(|x| gauss(-x), width, &opts(width))?;
        let along = Complex64::new(ahead.value[0] + behind.value[0], ahead.value[1] + behind.value[1]);
        let radial = integrate_half_line(
            |x| {
                let v = (q * x * x).exp() * x.powi(across_power);
                [v.re, v.im]
            },
            width,
            &opts(width.powi(across_power + 1)),
        )?;
        let across_part = Complex64::new(radial.value[0], radial.value[1]);
        let constant = Complex64::new(t.exponent.r2, t.phase.r2) * (r * r) + q * peak * peak + lin * peak;
        total += t.amplitude * (constant.exp() * along * across_part).re;
    }
    Ok(across * total)
}
