//! Command-line front end: `verify-weyl`, `freeparticle`, `hydrogen` and
//! `wigner-grid`. Each command writes its data file plus a run manifest at
//! `<out>.manifest.json`.
//!
//! Exit codes: 0 success, 2 usage, 3 numerical failure (including failed
//! identities).

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Dimension;
use crate::hydrofit::{fit_series_partial, kinetic_series, write_series_csv, ExponentScheme, FitConfig, MAX_GAUSSIANS};
use crate::moyal::{verify_suite, IdentityStatus, SuiteOptions};
use crate::phasespace::{phase_report, phase_report_closed_form_free, PhaseQuadrature, ATOMIC_UNITS};
use crate::states::{HydrogenicState, RadialGaussianState};
use crate::wigner::{grid_export, linspace, wigner_of_state, write_grid_csv};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "phasekin", version, about = "Radial/angular kinetic energies in phase space")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the operator to phase-space mappings with exact arithmetic.
    VerifyWeyl(VerifyWeylArgs),
    /// Kinetic split of a spreading free Gaussian packet.
    Freeparticle(FreeParticleArgs),
    /// Gaussian fits of the D-dimensional hydrogen ground state.
    Hydrogen(HydrogenArgs),
    /// Sample a Wigner function on an (r, p, u) grid.
    WignerGrid(WignerGridArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyWeylArgs {
    /// Comma-separated dimensions, each at least 2.
    #[arg(long, value_delimiter = ',', value_parser = parse_dim, default_value = "2,3,4,5,6")]
    pub dim_list: Vec<u32>,
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// Exact positive rational mass, e.g. `3/2`.
    #[arg(long, default_value = "1", value_parser = parse_mass)]
    #[serde(serialize_with = "ser_display")]
    pub mass: BigRational,
    /// Drop the ħ² offsets from the expected symbols (negative control).
    #[arg(long)]
    pub omit_offsets: bool,
    #[arg(long, default_value = "weyl_report.json")]
    pub out: String,
}

#[derive(Debug, Args, Serialize)]
pub struct FreeParticleArgs {
    #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
    pub alpha: f64,
    #[arg(long, default_value_t = 5.0, value_parser = parse_non_negative)]
    pub tmax_over_tau: f64,
    /// Number of time points, including both ends.
    #[arg(long, default_value_t = 51, value_parser = clap::value_parser!(u64).range(2..=100_000))]
    pub steps: u64,
    #[arg(long, default_value_t = 3, value_parser = parse_dim)]
    pub dim: u32,
    #[arg(long, default_value = "freeparticle.csv")]
    pub out: String,
    /// Write energies in ħ = M = 1 units instead of ε = α²ħ²/M.
    #[arg(long)]
    pub raw_units: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeArg {
    EvenTempered,
    FullyOptimized,
}

#[derive(Debug, Args, Serialize)]
pub struct HydrogenArgs {
    #[arg(long, default_value_t = 3, value_parser = parse_dim)]
    pub dim: u32,
    /// Basis sizes: comma-separated values and inclusive ranges, e.g. `1..12` or `1,2,4,8`.
    #[arg(long, default_value = "1,2,4,8", value_parser = parse_n_list)]
    pub ngauss_list: NList,
    #[arg(long, value_enum, default_value_t = SchemeArg::EvenTempered)]
    pub scheme: SchemeArg,
    /// Seed for the random multistart points.
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    #[arg(long, default_value = "hydrogen.csv")]
    pub out: String,
    /// Label energies as ħ = M = a₀ = 1 instead of ε₀ = ħ²/(M a₀²).
    #[arg(long)]
    pub raw_units: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(transparent)]
pub struct NList(pub Vec<usize>);

#[derive(Debug, Args, Serialize)]
pub struct WignerGridArgs {
    /// Inline JSON, e.g. `{"type":"gaussian","alpha":1}`,
    /// `{"type":"gaussian_sum","dim":2,"coeffs":[..],"exponents":[..]}` or
    /// `{"type":"hydrogenfit","dim":2,"n":8}`.
    #[arg(long)]
    pub state_spec: String,
    /// Time in units of `M/(2ħ a_min)`, `a_min` the smallest exponent.
    #[arg(long, default_value_t = 0.0, value_parser = parse_non_negative)]
    pub t_over_tau: f64,
    /// Points along r, p and u: `nr,np,nu`.
    #[arg(long, default_value = "21,21,7", value_parser = parse_grid)]
    pub grid: GridShape,
    #[arg(long, default_value_t = 4.0, value_parser = parse_non_negative)]
    pub r_max: f64,
    #[arg(long, default_value_t = 4.0, value_parser = parse_non_negative)]
    pub p_max: f64,
    #[arg(long, default_value = "wigner_grid.csv")]
    pub out: String,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridShape {
    pub nr: usize,
    pub np: usize,
    pub nu: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Gaussian {
        alpha: f64,
        #[serde(default = "default_dim")]
        dim: u32,
    },
    GaussianSum {
        dim: u32,
        coeffs: Vec<f64>,
        exponents: Vec<f64>,
    },
    Hydrogenfit {
        dim: u32,
        n: usize,
        #[serde(default)]
        seed: Option<u64>,
    },
}

fn default_dim() -> u32 {
    3
}

/// Provenance record written next to every output.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a, F: Serialize> {
    pub command: &'a str,
    pub flags: &'a F,
    pub seeds: Vec<u64>,
    pub tool_version: &'static str,
    pub timestamp_unix: u64,
    pub outputs: Vec<String>,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn ser_display<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn parse_dim(s: &str) -> std::result::Result<u32, String> {
    let d: u32 = s.trim().parse().map_err(|e| format!("{e}"))?;
    Dimension::new(d).map(Dimension::get).map_err(|e| e.to_string())
}

fn parse_mass(s: &str) -> std::result::Result<BigRational, String> {
    let m: BigRational = s.trim().parse().map_err(|e| format!("not a rational: {e}"))?;
    if !m.is_positive() {
        return Err("mass must be positive".into());
    }
    Ok(m)
}

fn parse_positive(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if !(v.is_finite() && v > 0.0) {
        return Err(format!("expected a positive finite number, got {s}"));
    }
    Ok(v)
}

fn parse_non_negative(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if !(v.is_finite() && v >= 0.0) {
        return Err(format!("expected a non-negative finite number, got {s}"));
    }
    Ok(v)
}

fn parse_n_list(s: &str) -> std::result::Result<NList, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        let (lo, hi) = match part.split_once("..") {
            Some((a, b)) => (a, b.trim_start_matches('=')),
            None => (part, part),
        };
        let lo: usize = lo.trim().parse().map_err(|e| format!("bad basis size `{part}`: {e}"))?;
        let hi: usize = hi.trim().parse().map_err(|e| format!("bad basis size `{part}`: {e}"))?;
        if lo > hi {
            return Err(format!("empty range `{part}`"));
        }
        out.extend(lo..=hi);
    }
    if out.iter().any(|&n| n == 0 || n > MAX_GAUSSIANS) {
        return Err(format!("basis sizes must lie in 1..={MAX_GAUSSIANS}"));
    }
    if out.windows(2).any(|w| w[0] >= w[1]) {
        return Err("basis sizes must be strictly ascending".into());
    }
    Ok(NList(out))
}

fn parse_grid(s: &str) -> std::result::Result<GridShape, String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|v| v.trim().parse::<usize>().map_err(|e| format!("bad grid size `{v}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    match parts[..] {
        [nr, np, nu] if nr > 0 && np > 0 && nu > 0 && nr * np * nu <= 10_000_000 => Ok(GridShape { nr, np, nu }),
        [_, _, _] => Err("grid sizes must be positive with at most 1e7 points".into()),
        _ => Err("expected nr,np,nu".into()),
    }
}

/// Failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Domain(_) | Error::Contract(_) | Error::Parse(_) => EXIT_USAGE,
            _ => EXIT_NUMERICAL,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: msg.into() }
}

fn io_failure(path: &str, e: impl std::fmt::Display) -> Failure {
    Failure { code: EXIT_NUMERICAL, message: format!("cannot write {path}: {e}") }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let res = match &cli.command {
        Command::VerifyWeyl(a) => verify_weyl(a),
        Command::Freeparticle(a) => freeparticle(a),
        Command::Hydrogen(a) => hydrogen(a),
        Command::WignerGrid(a) => wigner_grid(a),
    };
    match res {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn create(path: &str) -> std::result::Result<BufWriter<File>, Failure> {
    if let Some(dir) = Path::new(path).parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_failure(path, e))?;
    }
    File::create(path).map(BufWriter::new).map_err(|e| io_failure(path, e))
}

fn write_json<T: Serialize>(path: &str, value: &T) -> std::result::Result<(), Failure> {
    let mut f = create(path)?;
    serde_json::to_writer_pretty(&mut f, value).map_err(|e| io_failure(path, e))?;
    writeln!(f).and_then(|_| f.flush()).map_err(|e| io_failure(path, e))
}

fn manifest_path(out: &str) -> String {
    format!("{out}.manifest.json")
}

fn write_manifest<F: Serialize>(
    command: &str,
    flags: &F,
    seeds: Vec<u64>,
    out: &str,
    outputs: Vec<String>,
    error: Option<String>,
) -> std::result::Result<(), Failure> {
    let timestamp_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let manifest = RunManifest {
        command,
        flags,
        seeds,
        tool_version: env!("CARGO_PKG_VERSION"),
        timestamp_unix,
        outputs,
        complete: error.is_none(),
        error,
    };
    write_json(&manifest_path(out), &manifest)
}

fn verify_weyl(a: &VerifyWeylArgs) -> std::result::Result<(), Failure> {
    let dims = a.dim_list.iter().map(|&d| Dimension::new(d)).collect::<Result<Vec<_>>>()?;
    let trials = usize::try_from(a.trials).map_err(|_| usage("--trials too large"))?;
    let opts = SuiteOptions { dims, trials, seed: a.seed, mass: a.mass.clone(), omit_offsets: a.omit_offsets };
    let records = verify_suite(&opts)?;
    write_json(&a.out, &records)?;
    let failed: Vec<String> = records
        .iter()
        .filter(|r| r.status == IdentityStatus::Fail)
        .map(|r| format!("{} (D={})", r.identity_name, r.dimension))
        .collect();
    let error = (!failed.is_empty()).then(|| format!("identities failed: {}", failed.join(", ")));
    write_manifest("verify-weyl", a, vec![a.seed], &a.out, vec![a.out.clone()], error.clone())?;
    println!("{} identities checked, {} failed; report in {}", records.len(), failed.len(), a.out);
    match error {
        None => Ok(()),
        Some(message) => Err(Failure { code: EXIT_NUMERICAL, message }),
    }
}

fn freeparticle(a: &FreeParticleArgs) -> std::result::Result<(), Failure> {
    let d = Dimension::new(a.dim)?;
    let eps = a.alpha * a.alpha;
    let tau = 1.0 / eps;
    let unit = if a.raw_units { 1.0 } else { eps };
    let base = wigner_of_state(&RadialGaussianState::minimum_uncertainty(d, a.alpha)?);
    let quad = PhaseQuadrature::default();
    let steps = a.steps as usize;
    let mut body = String::from("t_over_tau,T_total,T_rad,T_ang,T_rad_closed,T_ang_closed\n");
    let mut error = None;
    for k in 0..steps {
        let s = a.tmax_over_tau * k as f64 / (steps - 1) as f64;
        let rep = match base.evolve_free(s * tau, 1.0).and_then(|w| phase_report(&w, &quad)) {
            Ok(r) => r,
            Err(e) => {
                error = Some(Failure::from(e));
                break;
            }
        };
        let closed = if d.get() == 3 {
            let c = phase_report_closed_form_free(a.alpha, s * tau, 1.0, d)?;
            format!("{:.16e},{:.16e}", c.t_rad / unit, c.t_ang / unit)
        } else {
            ",".to_string()
        };
        body.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{closed}\n",
            s,
            rep.t_total / unit,
            rep.t_rad / unit,
            rep.t_ang / unit
        ));
    }
    let mut f = create(&a.out)?;
    f.write_all(body.as_bytes()).and_then(|_| f.flush()).map_err(|e| io_failure(&a.out, e))?;
    let msg = error.as_ref().map(|e| e.message.clone());
    write_manifest("freeparticle", a, Vec::new(), &a.out, vec![a.out.clone()], msg)?;
    match error {
        None => {
            println!("wrote {} rows to {}", steps, a.out);
            Ok(())
        }
        Some(e) => Err(e),
    }
}

#[derive(Serialize)]
struct FitManifest<'a> {
    units: &'a str,
    complete: bool,
    fits: &'a [crate::hydrofit::FitResult],
    #[serde(skip_serializing_if = "Option::is_none")]
    failed_fit: Option<&'a crate::hydrofit::FitResult>,
}

fn hydrogen(a: &HydrogenArgs) -> std::result::Result<(), Failure> {
    let d = Dimension::new(a.dim)?;
    let n_list = &a.ngauss_list.0;
    let mut cfg = FitConfig::new(d, n_list[0]);
    cfg.seed = a.seed;
    cfg.scheme = match a.scheme {
        SchemeArg::EvenTempered => ExponentScheme::EvenTempered,
        SchemeArg::FullyOptimized => ExponentScheme::FullyOptimized,
    };
    let (fits, fit_error) = fit_series_partial(&cfg, n_list);
    let (rows, error) = match kinetic_series(&fits, &PhaseQuadrature::default()) {
        Ok(rows) => (rows, fit_error),
        Err(e) => (Vec::new(), Some(fit_error.unwrap_or(e))),
    };
    let units = if a.raw_units { ATOMIC_UNITS } else { "epsilon0" };
    let mut f = create(&a.out)?;
    write_series_csv(&rows, &mut f).map_err(|e| io_failure(&a.out, e))?;
    f.flush().map_err(|e| io_failure(&a.out, e))?;

    let failed_fit = match &error {
        Some(Error::OptimizerNotConverged { best, .. }) => Some(best.as_ref()),
        _ => None,
    };
    let fits_path = format!("{}.fits.json", a.out);
    write_json(&fits_path, &FitManifest { units, complete: error.is_none(), fits: &fits, failed_fit })?;
    let msg = error.as_ref().map(|e| format!("{e}; CSV holds the {} completed rows only", rows.len()));
    write_manifest("hydrogen", a, vec![a.seed], &a.out, vec![a.out.clone(), fits_path], msg)?;

    // units of ε₀ = 1 in atomic units, so both labels share the numbers
    let exact = HydrogenicState::new(d, 1.0)?;
    println!("wrote {} rows to {} ({units})", rows.len(), a.out);
    println!(
        "exact anchors for D={}: <T> = {:.6}, T_rad -> 0, T_ang -> {:.6}",
        d.get(),
        exact.kinetic_closed_form(),
        exact.kinetic_closed_form()
    );
    match error {
        None => Ok(()),
        Some(e) => Err(Failure { code: EXIT_NUMERICAL, message: e.to_string() }),
    }
}

fn spec_state(spec: &StateSpec) -> Result<(RadialGaussianState, Vec<u64>)> {
    match spec {
        StateSpec::Gaussian { alpha, dim } => {
            if !(alpha.is_finite() && *alpha > 0.0) {
                return Err(Error::Domain(format!("alpha must be positive, got {alpha}")));
            }
            Ok((RadialGaussianState::minimum_uncertainty(Dimension::new(*dim)?, *alpha)?, Vec::new()))
        }
        StateSpec::GaussianSum { dim, coeffs, exponents } => {
            let s = RadialGaussianState::new(Dimension::new(*dim)?, coeffs.clone(), exponents.clone())?;
            Ok((s.normalize()?, Vec::new()))
        }
        StateSpec::Hydrogenfit { dim, n, seed } => {
            let mut cfg = FitConfig::new(Dimension::new(*dim)?, *n);
            if let Some(s) = seed {
                cfg.seed = *s;
            }
            let list: Vec<usize> = (1..=*n).collect();
            let (mut fits, err) = fit_series_partial(&cfg, &list);
            if let Some(e) = err {
                return Err(e);
            }
            let fit = fits.pop().ok_or_else(|| Error::Domain("n must be at least 1".into()))?;
            Ok((fit.state, vec![cfg.seed]))
        }
    }
}

fn wigner_grid(a: &WignerGridArgs) -> std::result::Result<(), Failure> {
    let spec: StateSpec = serde_json::from_str(&a.state_spec).map_err(|e| usage(format!("bad --state-spec: {e}")))?;
    let (state, seeds) = spec_state(&spec)?;
    let a_min = state.exponents().iter().copied().fold(f64::INFINITY, f64::min);
    let t = a.t_over_tau / (2.0 * a_min);
    let w = wigner_of_state(&state).evolve_free(t, 1.0)?;
    let g = a.grid;
    let u_values = linspace(std::f64::consts::PI, g.nu);
    let rows = grid_export(&w, &linspace(a.r_max, g.nr), &linspace(a.p_max, g.np), &u_values)?;
    let mut f = create(&a.out)?;
    write_grid_csv(&rows, &mut f).map_err(|e| io_failure(&a.out, e))?;
    f.flush().map_err(|e| io_failure(&a.out, e))?;
    write_manifest("wigner-grid", a, seeds, &a.out, vec![a.out.clone()], None)?;
    println!("wrote {} grid points to {}", rows.len(), a.out);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::RadialState;

    #[test]
    fn basis_size_lists() {
        assert_eq!(parse_n_list("1..4,8").unwrap().0, vec![1, 2, 3, 4, 8]);
        assert_eq!(parse_n_list("1,2,4,8").unwrap().0, vec![1, 2, 4, 8]);
        assert_eq!(parse_n_list("1..=3").unwrap().0, vec![1, 2, 3]);
        assert!(parse_n_list("4,2").is_err());
        assert!(parse_n_list("0..3").is_err());
        assert!(parse_n_list("1..40").is_err());
        assert!(parse_n_list("x").is_err());
    }

    #[test]
    fn grid_and_mass_parsing() {
        assert!(parse_grid("3,4,5").is_ok());
        assert!(parse_grid("3,4").is_err());
        assert!(parse_grid("3,0,5").is_err());
        assert_eq!(parse_mass("3/2").unwrap().to_string(), "3/2");
        assert!(parse_mass("-1").is_err());
        assert!(parse_dim("1").is_err());
    }

    #[test]
    fn state_specs() {
        let g: StateSpec = serde_json::from_str(r#"{"type":"gaussian","alpha":1.5}"#).unwrap();
        let (s, _) = spec_state(&g).unwrap();
        assert_eq!(s.dim().get(), 3);
        let sum: StateSpec =
            serde_json::from_str(r#"{"type":"gaussian_sum","dim":2,"coeffs":[1,-0.5],"exponents":[0.5,2]}"#).unwrap();
        assert!(spec_state(&sum).is_ok());
        assert!(serde_json::from_str::<StateSpec>(r#"{"type":"bogus"}"#).is_err());
        assert!(serde_json::from_str::<StateSpec>(r#"{"type":"gaussian","alpha":1,"extra":2}"#).is_err());
        let bad: StateSpec = serde_json::from_str(r#"{"type":"gaussian","alpha":-1}"#).unwrap();
        assert!(spec_state(&bad).is_err());
    }
}
