//! Polynomial identity testing for phase-space functions.
//!
//! Functions are compared by exact evaluation at random rational points
//! instead of by normal forms modulo `r² = Σ x_k²`. Points are drawn on
//! spheres of rational radius (inverse stereographic projection of a random
//! rational vector), so every power of `r`, odd or even, evaluates exactly.
//! Each power of ħ is checked separately because ħ is formal.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::operators::*;
use super::poly::{rational, EvalPoint, PhasePoly};
use super::rational::GaussianRational;
use super::star::star;
use crate::error::{Error, Result};
use crate::geometry::Dimension;

fn random_rational<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> BigRational {
    let num = rng.random_range(-max_num..=max_num);
    let den = rng.random_range(1..=max_den);
    rational(num, den)
}

/// Random point with rational coordinates and rational hyperradius.
pub fn random_point<R: Rng>(d: Dimension, rng: &mut R) -> EvalPoint {
    let n = d.as_usize();
    let t: Vec<BigRational> = (0..n - 1).map(|_| random_rational(rng, 7, 6)).collect();
    let s: BigRational = t.iter().map(|v| v * v).fold(BigRational::zero(), |a, b| a + b);
    let one = BigRational::one();
    let denom = &one + &s;
    let two = BigRational::from_integer(BigInt::from(2));
    let radius = rational(rng.random_range(1..=9), rng.random_range(1..=7));
    let mut x: Vec<BigRational> = t.iter().map(|tk| &radius * &two * tk / &denom).collect();
    x.push(&radius * (&one - &s) / &denom);
    let p = (0..n).map(|_| random_rational(rng, 9, 5)).collect();
    EvalPoint::new(x, p, radius).expect("stereographic point lies on its sphere")
}

/// True iff `lhs − rhs` vanishes exactly at `trials` random points, for
/// every power of ħ separately.
pub fn identity_check(lhs: &PhasePoly, rhs: &PhasePoly, trials: usize, seed: u64) -> Result<bool> {
    if trials == 0 {
        return Err(Error::Contract("identity check needs at least one trial".into()));
    }
    let diff = lhs.try_sub(rhs)?;
    if diff.is_zero() {
        return Ok(true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let point = random_point(lhs.dim(), &mut rng);
        if !diff.evaluate(&point)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IdentityStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityRecord {
    pub identity_name: String,
    pub dimension: u32,
    pub status: IdentityStatus,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub dims: Vec<Dimension>,
    pub trials: usize,
    pub seed: u64,
    pub mass: BigRational,
    /// Negative control: drop every ħ² offset from the expected symbols.
    pub omit_offsets: bool,
}

impl SuiteOptions {
    pub fn new(dims: Vec<Dimension>, trials: usize, seed: u64) -> Self {
        Self { dims, trials, seed, mass: BigRational::one(), omit_offsets: false }
    }
}

/// One named identity `lhs == rhs`.
pub struct NamedIdentity {
    pub name: &'static str,
    pub lhs: PhasePoly,
    pub rhs: PhasePoly,
}

/// The operator ↔ phase-space mappings checked for dimension `d`.
pub fn identities(d: Dimension, mass: &BigRational, omit_offsets: bool) -> Result<Vec<NamedIdentity>> {
    let keep = |p: PhasePoly| if omit_offsets { PhasePoly::zero(d) } else { p };
    let hbar = PhasePoly::hbar_pow(d, 1);
    let hbar2 = PhasePoly::hbar_pow(d, 2);
    let mut out = Vec::new();

    let x0 = PhasePoly::x(d, 0);
    let p0 = PhasePoly::p(d, 0);
    out.push(NamedIdentity {
        name: "canonical_commutator",
        lhs: &star(&x0, &p0)? - &star(&p0, &x0)?,
        rhs: hbar.scale(&GaussianRational::i()),
    });

    let l01 = lambda_ij(d, 0, 1)?;
    out.push(NamedIdentity {
        name: "L_ij_squared",
        lhs: angular_momentum_op(d, 0, 1)?.compose(&angular_momentum_op(d, 0, 1)?)?.weyl()?,
        rhs: &l01.pow(2) - &keep(hbar2.scale_rational(1, 2)),
    });

    out.push(NamedIdentity {
        name: "L_squared",
        lhs: weyl_l_squared(d)?,
        rhs: &lambda_squared(d)? - &keep(angular_momentum_offset(d)),
    });

    let (t_rad, t_ang) = weyl_kinetic_split(d, mass)?;
    let offset = keep(radial_kinetic_offset(d, mass)?);
    out.push(NamedIdentity { name: "T_rad", lhs: t_rad.clone(), rhs: &classical_radial_kinetic(d, mass)? + &offset });
    out.push(NamedIdentity { name: "T_ang", lhs: t_ang.clone(), rhs: &classical_angular_kinetic(d, mass)? - &offset });
    out.push(NamedIdentity { name: "T_total", lhs: &t_rad + &t_ang, rhs: kinetic_op(d, mass)?.weyl()? });

    let p_r = radial_momentum_op(d)?;
    out.push(NamedIdentity { name: "p_r", lhs: p_r.weyl()?, rhs: classical_radial_momentum(d) });
    let n = i64::from(d.get());
    let p_r2 = p_r.compose(&p_r)?.weyl()?;
    out.push(NamedIdentity {
        name: "p_r_squared",
        lhs: p_r2.clone(),
        rhs: &classical_radial_momentum(d).pow(2) + &keep(hbar_radial_term(d, rational(n - 1, 4), 2, -2)),
    });

    // T̂_rad = p̂_r²/2M + ħ²(D−1)(D−3)/(8M r²), both sides mapped to phase space
    let two_m = mass * BigRational::from_integer(BigInt::from(2));
    out.push(NamedIdentity {
        name: "T_rad_via_p_r",
        lhs: t_rad,
        rhs: &p_r2.scale(&GaussianRational::real(two_m.recip()))
            + &hbar_radial_term(d, rational((n - 1) * (n - 3), 8) / mass, 2, -2),
    });

    let residual = resolve_identity_residual(d)?;
    let mut flat = PhasePoly::zero(d);
    // Combine entries with distinct ħ powers so one check covers all of them
    // without letting entries cancel each other.
    for (idx, e) in residual.into_iter().flatten().enumerate() {
        flat = &flat + &(&e * &PhasePoly::hbar_pow(d, idx as u32));
    }
    out.push(NamedIdentity { name: "resolve_identity", lhs: flat, rhs: PhasePoly::zero(d) });

    Ok(out)
}

/// Runs every identity for every requested dimension.
pub fn verify_suite(opts: &SuiteOptions) -> Result<Vec<IdentityRecord>> {
    let mut records = Vec::new();
    for &d in &opts.dims {
        for id in identities(d, &opts.mass, opts.omit_offsets)? {
            let ok = identity_check(&id.lhs, &id.rhs, opts.trials, opts.seed)?;
            records.push(IdentityRecord {
                identity_name: id.name.to_string(),
                dimension: d.get(),
                status: if ok { IdentityStatus::Pass } else { IdentityStatus::Fail },
                trials: opts.trials,
                seed: opts.seed,
            });
        }
    }
    Ok(records)
}
