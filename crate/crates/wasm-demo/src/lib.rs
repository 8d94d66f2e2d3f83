//! Browser bindings for the static demo page in `www/`.
//!
//! Results come back as flat `Float64Array`s; the page reshapes them.

use phasekin::hydrofit::fig2_series;
use phasekin::phasespace::{phase_report, phase_report_closed_form_free, PhaseQuadrature};
use phasekin::states::RadialGaussianState;
use phasekin::wigner::{linspace, wigner_of_state};
use phasekin::Dimension;
use wasm_bindgen::prelude::*;

fn dim(d: u32) -> Result<Dimension, String> {
    Dimension::new(d).map_err(|e| e.to_string())
}

/// Rows of `(t/τ, T, T_rad, T_ang, T_rad closed, T_ang closed)` in units of
/// `ε = α²`, for `steps` times on `[0, tmax_over_tau]`.
pub fn free_particle_rows(alpha: f64, tmax_over_tau: f64, steps: usize) -> Result<Vec<f64>, String> {
    if steps < 2 || steps > 2000 {
        return Err(format!("steps must lie in 2..=2000, got {steps}"));
    }
    if !(tmax_over_tau.is_finite() && tmax_over_tau >= 0.0) {
        return Err("tmax must be non-negative".into());
    }
    let d = dim(3)?;
    let eps = alpha * alpha;
    let base = wigner_of_state(&RadialGaussianState::minimum_uncertainty(d, alpha).map_err(|e| e.to_string())?);
    let quad = PhaseQuadrature::default();
    let mut out = Vec::with_capacity(6 * steps);
    for k in 0..steps {
        let s = tmax_over_tau * k as f64 / (steps - 1) as f64;
        let t = s / eps;
        let w = base.evolve_free(t, 1.0).map_err(|e| e.to_string())?;
        let rep = phase_report(&w, &quad).map_err(|e| e.to_string())?;
        let closed = phase_report_closed_form_free(alpha, t, 1.0, d).map_err(|e| e.to_string())?;
        out.extend([s, rep.t_total / eps, rep.t_rad / eps, rep.t_ang / eps, closed.t_rad / eps, closed.t_ang / eps]);
    }
    Ok(out)
}

/// `W(r, p, u)` of the free Gaussian on an `n × n` grid over
/// `[0, r_max] × [0, p_max]`, row-major in `r`.
pub fn gaussian_slice(
    alpha: f64,
    t_over_tau: f64,
    u: f64,
    r_max: f64,
    p_max: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    if n == 0 || n > 400 {
        return Err(format!("grid size must lie in 1..=400, got {n}"));
    }
    if !(0.0..=std::f64::consts::PI).contains(&u) {
        return Err("u must lie in [0, π]".into());
    }
    let state = RadialGaussianState::minimum_uncertainty(dim(3)?, alpha).map_err(|e| e.to_string())?;
    let w = wigner_of_state(&state).evolve_free(t_over_tau / (alpha * alpha), 1.0).map_err(|e| e.to_string())?;
    let ps = linspace(p_max, n);
    Ok(linspace(r_max, n).iter().flat_map(|&r| ps.iter().map(move |&p| (r, p))).map(|(r, p)| w.eval(r, p, u)).collect())
}

/// Rows of `(N, T, T_rad, T_ang, energy)` for hydrogen fits `N = 1..=n_max`.
pub fn hydrogen_rows(d: u32, n_max: usize) -> Result<Vec<f64>, String> {
    if n_max == 0 || n_max > 16 {
        return Err(format!("N must lie in 1..=16, got {n_max}"));
    }
    let list: Vec<usize> = (1..=n_max).collect();
    let (_, rows) = fig2_series(dim(d)?, &list).map_err(|e| e.to_string())?;
    Ok(rows.iter().flat_map(|r| [r.n as f64, r.t_total, r.t_rad, r.t_ang, r.energy]).collect())
}

#[wasm_bindgen(js_name = freeParticle)]
pub fn free_particle(alpha: f64, tmax_over_tau: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    free_particle_rows(alpha, tmax_over_tau, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = wignerSlice)]
pub fn wigner_slice(
    alpha: f64,
    t_over_tau: f64,
    u: f64,
    r_max: f64,
    p_max: f64,
    n: usize,
) -> Result<Vec<f64>, JsError> {
    gaussian_slice(alpha, t_over_tau, u, r_max, p_max, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = hydrogenSeries)]
pub fn hydrogen_series(d: u32, n_max: usize) -> Result<Vec<f64>, JsError> {
    hydrogen_rows(d, n_max).map_err(|e| JsError::new(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_particle_endpoints() {
        let rows = free_particle_rows(1.0, 5.0, 3).unwrap();
        assert_eq!(rows.len(), 18);
        assert!((rows[1] - 0.75).abs() < 1e-12 && (rows[2] - 0.25).abs() < 1e-12);
        assert!((rows[15] - 1.0 / 52.0).abs() < 1e-12);
        assert!(free_particle_rows(1.0, 5.0, 1).is_err());
    }

    #[test]
    fn slice_shape_and_peak() {
        let v = gaussian_slice(1.0, 0.0, 0.0, 2.0, 2.0, 5).unwrap();
        assert_eq!(v.len(), 25);
        assert!((v[0] - std::f64::consts::PI.powi(-3)).abs() < 1e-15);
        assert!(v.iter().all(|x| *x >= 0.0));
        assert!(gaussian_slice(1.0, 0.0, 4.0, 2.0, 2.0, 5).is_err());
    }

    #[test]
    fn hydrogen_rows_layout() {
        let v = hydrogen_rows(2, 2).unwrap();
        assert_eq!(v.len(), 10);
        assert_eq!(v[0], 1.0);
        assert!((v[2] - v[3]).abs() < 1e-9);
        assert!(hydrogen_rows(1, 2).is_err());
    }
}
