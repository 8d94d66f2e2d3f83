//! Polar quadrature in the `(r, p)` plane, one term at a time.
//!
//! Free flight maps `W_t(r, p) = W_0(r − s p, p)`. Each term is integrated in
//! its own frame: `r − s p = σ_r ρ cos φ ê`, `p = σ_p ρ sin φ ê'` with
//! `cos u = ê·ê'`, the widths chosen so the real part of the exponent is
//! `−ρ²`. The term is then `amp · Re exp(−q(φ, u) ρ²)` with complex `q`,
//! `Re q ≥` a positive constant, and the `ρ` integral is `Γ(k)/(2 q^k)` in
//! closed form. Every needed observable is homogeneous of degree 2 or 4 in
//! `ρ`, so what remains is a bounded integrand over `φ ∈ [0, π/2]` and
//! `u ∈ [0, π]`, done by nested adaptive Gauss–Legendre.
//!
//! Summing terms before integrating would put near-poles of opposite sign
//! from narrow and broad components into one integrand; per-term frames keep
//! the cancellation to a sum of moderate totals.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::PhaseMoments;
use crate::error::{Error, Result};
use crate::geometry::{gamma, reduced_measure};
use crate::quadrature::{integrate_adaptive, AdaptiveOptions};
use crate::wigner::{WignerGaussianSum, WignerTerm};

#[derive(Debug, Clone, Copy)]
pub struct PhaseQuadrature {
    /// Relative tolerance of the outer (`φ`) integral.
    pub rel_tol: f64,
    /// Relative tolerance of each inner (`u`) integral.
    pub inner_rel_tol: f64,
    pub max_panels: usize,
}

impl Default for PhaseQuadrature {
    fn default() -> Self {
        Self { rel_tol: 1e-11, inner_rel_tol: 1e-12, max_panels: 4000 }
    }
}

/// One term in its own frame.
struct Frame {
    amp: f64,
    sigma_r: f64,
    sigma_p: f64,
    /// `q = 1 − c_mix cosφ sinφ cos u − i(ph_r cos²φ + ph_p sin²φ + ph_x cosφ sinφ cos u)`
    c_mix: f64,
    ph_r: f64,
    ph_p: f64,
    ph_x: f64,
    /// `s σ_p/σ_r`: `|r|² = σ_r² ρ² ((cosφ + κ sinφ cos u)² + (κ sinφ sin u)²)`.
    kappa: f64,
}

impl Frame {
    fn new(t: &WignerTerm, shear: f64) -> Result<Self> {
        let e = t.exponent;
        if !(e.r2 < 0.0 && e.p2 < 0.0 && e.rp * e.rp < 4.0 * e.r2 * e.p2) {
            return Err(Error::Domain(format!(
                "Wigner term exponent (r2={}, p2={}, rp={}) is not negative definite",
                e.r2, e.p2, e.rp
            )));
        }
        let sigma_r = (-1.0 / e.r2).sqrt();
        let sigma_p = (-1.0 / e.p2).sqrt();
        let sp = sigma_r * sigma_p;
        Ok(Self {
            amp: t.amplitude,
            sigma_r,
            sigma_p,
            c_mix: e.rp * sp,
            ph_r: t.phase.r2 * sigma_r * sigma_r,
            ph_p: t.phase.p2 * sigma_p * sigma_p,
            ph_x: t.phase.rp * sp,
            kappa: shear * sigma_p / sigma_r,
        })
    }
}

/// Moments of `w` by per-term polar quadrature. The reported error is the
/// sum over terms of the outer estimate plus the integrated inner estimates.
pub fn polar_moments(w: &WignerGaussianSum, cfg: &PhaseQuadrature) -> Result<PhaseMoments> {
    let d = w.dim();
    let n = d.get() as i32;
    let measure = reduced_measure(d);
    // ∫ρ^{2D−1+2j} e^{−qρ²} dρ = Γ(D+j)/(2 q^{D+j})
    let g = [0.5 * gamma(f64::from(n)), 0.5 * gamma(f64::from(n + 1)), 0.5 * gamma(f64::from(n + 2))];
    let mut total = PhaseMoments::default();
    for t in w.base_terms() {
        let f = Frame::new(t, w.shift())?;
        let m = frame_moments(&f, n, measure.angle_power, &g, cfg)?;
        // back from frame units: d^Dr d^Dp gives (σ_r σ_p)^D
        let scale = f.amp * measure.prefactor * (f.sigma_r * f.sigma_p).powi(n);
        let sp2 = f.sigma_p * f.sigma_p;
        total.norm += scale * m[0];
        total.p2 += scale * sp2 * m[1];
        total.p2_radial += scale * sp2 * (m[1] - m[2]);
        total.p2_angular += scale * sp2 * m[2];
        total.lambda2 += scale * sp2 * f.sigma_r * f.sigma_r * m[3];
        total.error += scale.abs() * m[4];
    }
    Ok(total)
}

/// `[norm, p², p_ang², Λ², error]` of one unit-amplitude term in frame units.
fn frame_moments(f: &Frame, n: i32, angle_power: i32, g: &[f64; 3], cfg: &PhaseQuadrature) -> Result<[f64; 5]> {
    // |q| ≥ Re q is bounded below, so g[0] sets the size of the integrand
    let size = g[0] * PI * FRAC_PI_2;
    let inner_opts = AdaptiveOptions {
        abs_tol: cfg.inner_rel_tol * size,
        rel_tol: cfg.inner_rel_tol,
        max_panels: cfg.max_panels,
        initial_panels: 2,
    };
    let outer_opts = AdaptiveOptions {
        abs_tol: cfg.rel_tol * size,
        rel_tol: cfg.rel_tol,
        max_panels: cfg.max_panels,
        initial_panels: 8,
    };

    let mut failure: Option<Error> = None;
    let integrand = |phi: f64| {
        let (s, c) = phi.sin_cos();
        let radial_weight = (c * s).powi(n - 1);
        if radial_weight == 0.0 {
            return [0.0; 5];
        }
        let (c2, s2, cs) = (c * c, s * s, c * s);
        let inner = integrate_adaptive(
            |u| {
                let (su, cu) = u.sin_cos();
                let angle_weight = su.powi(angle_power);
                let q = Complex64::new(1.0 - f.c_mix * cs * cu, -(f.ph_r * c2 + f.ph_p * s2 + f.ph_x * cs * cu));
                let inv = q.inv();
                let inv_n = inv.powi(n);
                let i0 = g[0] * inv_n.re;
                let i1 = g[1] * (inv_n * inv).re;
                let i2 = g[2] * (inv_n * inv * inv).re;
                // r = r' + s p in frame units, as a sum of squares
                let along = c + f.kappa * s * cu;
                let across = f.kappa * s * su;
                let r_sq = along * along + across * across;
                let lam = c2 * s2 * su * su;
                let p_ang = if r_sq > 0.0 { lam / r_sq } else { 0.0 };
                [angle_weight * i0, angle_weight * i1 * s2, angle_weight * i1 * p_ang, angle_weight * i2 * lam]
            },
            0.0,
            PI,
            &inner_opts,
        );
        match inner {
            Ok(e) => {
                let v = e.value;
                [
                    radial_weight * v[0],
                    radial_weight * v[1],
                    radial_weight * v[2],
                    radial_weight * v[3],
                    radial_weight * e.error,
                ]
            }
            Err(e) => {
                failure.get_or_insert(e);
                [0.0; 5]
            }
        }
    };
    // r vanishes at tan φ = 1/|κ| (u = π for κ > 0, u = 0 for κ < 0); the
    // angular observable has a direction-dependent limit there, so φ is
    // split at that point
    let kink = if f.kappa != 0.0 { (1.0 / f.kappa.abs()).atan() } else { FRAC_PI_2 };
    let mut integrand = integrand;
    let mut v = [0.0; 5];
    let mut error = 0.0;
    for (a, b) in [(0.0, kink), (kink, FRAC_PI_2)] {
        if b > a {
            let part = integrate_adaptive(&mut integrand, a, b, &outer_opts)?;
            for (acc, x) in v.iter_mut().zip(part.value) {
                *acc += x;
            }
            error += part.error;
        }
    }
    if let Some(e) = failure {
        return Err(e);
    }
    Ok([v[0], v[1], v[2], v[3], error + v[4].abs()])
}
