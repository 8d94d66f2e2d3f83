//! Phase-space functions polynomial in `x_k`, `p_k` and ħ, times integer
//! powers of the hyperradius `r = (Σ x_k²)^{1/2}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::rational::GaussianRational;
use crate::error::{Error, Result};
use crate::geometry::Dimension;

/// Exponent pattern of one monomial `ħ^h · Π x_k^{a_k} · Π p_k^{b_k} · r^m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialKey {
    pub hbar_pow: u32,
    pub x_pows: Vec<u32>,
    pub p_pows: Vec<u32>,
    pub r_pow: i32,
}

impl MonomialKey {
    pub fn unit(d: usize) -> Self {
        Self { hbar_pow: 0, x_pows: vec![0; d], p_pows: vec![0; d], r_pow: 0 }
    }

    pub fn p_degree(&self) -> u32 {
        self.p_pows.iter().sum()
    }

    fn times(&self, other: &MonomialKey) -> MonomialKey {
        MonomialKey {
            hbar_pow: self.hbar_pow + other.hbar_pow,
            x_pows: self.x_pows.iter().zip(&other.x_pows).map(|(a, b)| a + b).collect(),
            p_pows: self.p_pows.iter().zip(&other.p_pows).map(|(a, b)| a + b).collect(),
            r_pow: self.r_pow + other.r_pow,
        }
    }
}

/// A single monomial with its coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseMonomial {
    pub coeff: GaussianRational,
    pub key: MonomialKey,
}

/// Sum of [`PhaseMonomial`]s in canonical form: one entry per exponent
/// pattern, no zero coefficients.
///
/// The form is canonical as a formal expression only. Two polynomials that
/// differ by a multiple of `r² - Σ x_k²` describe the same function; use
/// [`super::identity_check`] to compare functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhasePoly {
    d: Dimension,
    terms: BTreeMap<MonomialKey, GaussianRational>,
}

impl PhasePoly {
    pub fn zero(d: Dimension) -> Self {
        Self { d, terms: BTreeMap::new() }
    }

    pub fn constant(d: Dimension, c: GaussianRational) -> Self {
        Self::monomial(d, c, MonomialKey::unit(d.as_usize()))
    }

    pub fn one(d: Dimension) -> Self {
        Self::constant(d, GaussianRational::one())
    }

    pub fn monomial(d: Dimension, coeff: GaussianRational, key: MonomialKey) -> Self {
        let mut poly = Self::zero(d);
        poly.add_term(key, coeff);
        poly
    }

    /// Position component `x_k` (0-based).
    pub fn x(d: Dimension, k: usize) -> Self {
        let mut key = MonomialKey::unit(d.as_usize());
        key.x_pows[k] = 1;
        Self::monomial(d, GaussianRational::one(), key)
    }

    /// Momentum component `p_k` (0-based).
    pub fn p(d: Dimension, k: usize) -> Self {
        let mut key = MonomialKey::unit(d.as_usize());
        key.p_pows[k] = 1;
        Self::monomial(d, GaussianRational::one(), key)
    }

    /// `r^m`.
    pub fn r_pow(d: Dimension, m: i32) -> Self {
        let mut key = MonomialKey::unit(d.as_usize());
        key.r_pow = m;
        Self::monomial(d, GaussianRational::one(), key)
    }

    /// `ħ^n`.
    pub fn hbar_pow(d: Dimension, n: u32) -> Self {
        let mut key = MonomialKey::unit(d.as_usize());
        key.hbar_pow = n;
        Self::monomial(d, GaussianRational::one(), key)
    }

    pub fn dim(&self) -> Dimension {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MonomialKey, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = PhaseMonomial> + '_ {
        self.terms.iter().map(|(k, c)| PhaseMonomial { coeff: c.clone(), key: k.clone() })
    }

    /// Largest total momentum degree over all monomials.
    pub fn p_degree(&self) -> u32 {
        self.terms.keys().map(MonomialKey::p_degree).max().unwrap_or(0)
    }

    pub fn is_momentum_free(&self) -> bool {
        self.p_degree() == 0
    }

    /// True when no coefficient has a nonzero imaginary part.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussianRational::is_real)
    }

    pub fn add_term(&mut self, key: MonomialKey, coeff: GaussianRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        let mut out = Self::zero(self.d);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn scale_rational(&self, num: i64, den: i64) -> Self {
        self.scale(&GaussianRational::from_ratio(num, den))
    }

    /// Coefficient-wise complex conjugate.
    pub fn conj(&self) -> Self {
        Self { d: self.d, terms: self.terms.iter().map(|(k, v)| (k.clone(), v.conj())).collect() }
    }

    /// Part of the polynomial with exactly `n` powers of ħ.
    pub fn hbar_order(&self, n: u32) -> Self {
        Self {
            d: self.d,
            terms: self.terms.iter().filter(|(k, _)| k.hbar_pow == n).map(|(k, v)| (k.clone(), v.clone())).collect(),
        }
    }

    /// `∂/∂x_k`, using `∂r^m/∂x_k = m x_k r^{m-2}`.
    pub fn d_x(&self, k: usize) -> Self {
        let mut out = Self::zero(self.d);
        for (key, c) in &self.terms {
            differentiate_x(key, c, k, &mut out);
        }
        out
    }

    /// `∂/∂p_k`.
    pub fn d_p(&self, k: usize) -> Self {
        let mut out = Self::zero(self.d);
        for (key, c) in &self.terms {
            if let Some((nk, nc)) = differentiate_p(key, c, k, 1) {
                out.add_term(nk, nc);
            }
        }
        out
    }

    pub(crate) fn check_dim(&self, other: &PhasePoly) -> Result<()> {
        if self.d != other.d {
            return Err(Error::Contract(format!("phase-space dimension mismatch: {} vs {}", self.d, other.d)));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &PhasePoly) -> Result<PhasePoly> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &PhasePoly) -> Result<PhasePoly> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), -v.clone());
        }
        Ok(out)
    }

    /// Ordinary (commutative) pointwise product.
    pub fn try_mul(&self, other: &PhasePoly) -> Result<PhasePoly> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.d);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                out.add_term(ka.times(kb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> PhasePoly {
        let mut acc = PhasePoly::one(self.d);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

/// Adds `∂(c·key)/∂x_k` into `out`.
pub(crate) fn differentiate_x(key: &MonomialKey, c: &GaussianRational, k: usize, out: &mut PhasePoly) {
    let a = key.x_pows[k];
    if a > 0 {
        let mut nk = key.clone();
        nk.x_pows[k] -= 1;
        out.add_term(nk, c * &GaussianRational::from_int(i64::from(a)));
    }
    if key.r_pow != 0 {
        let mut nk = key.clone();
        nk.x_pows[k] += 1;
        nk.r_pow -= 2;
        out.add_term(nk, c * &GaussianRational::from_int(i64::from(key.r_pow)));
    }
}

/// `∂^n(c·key)/∂p_k^n`, or `None` when it vanishes.
pub(crate) fn differentiate_p(
    key: &MonomialKey,
    c: &GaussianRational,
    k: usize,
    n: u32,
) -> Option<(MonomialKey, GaussianRational)> {
    let b = key.p_pows[k];
    if n > b {
        return None;
    }
    let falling: i64 = ((b - n + 1)..=b).map(i64::from).product();
    let mut nk = key.clone();
    nk.p_pows[k] -= n;
    Some((nk, c * &GaussianRational::from_int(falling)))
}

impl Add for &PhasePoly {
    type Output = PhasePoly;

    fn add(self, rhs: &PhasePoly) -> PhasePoly {
        self.try_add(rhs).expect("dimension mismatch in PhasePoly addition")
    }
}

impl Add for PhasePoly {
    type Output = PhasePoly;

    fn add(self, rhs: PhasePoly) -> PhasePoly {
        &self + &rhs
    }
}

impl Sub for &PhasePoly {
    type Output = PhasePoly;

    fn sub(self, rhs: &PhasePoly) -> PhasePoly {
        self.try_sub(rhs).expect("dimension mismatch in PhasePoly subtraction")
    }
}

impl Sub for PhasePoly {
    type Output = PhasePoly;

    fn sub(self, rhs: PhasePoly) -> PhasePoly {
        &self - &rhs
    }
}

impl Mul for &PhasePoly {
    type Output = PhasePoly;

    fn mul(self, rhs: &PhasePoly) -> PhasePoly {
        self.try_mul(rhs).expect("dimension mismatch in PhasePoly product")
    }
}

impl Mul for PhasePoly {
    type Output = PhasePoly;

    fn mul(self, rhs: PhasePoly) -> PhasePoly {
        &self * &rhs
    }
}

impl Neg for PhasePoly {
    type Output = PhasePoly;

    fn neg(self) -> PhasePoly {
        self.scale(&GaussianRational::from_int(-1))
    }
}

/// A phase-space point with exact rational coordinates and rational
/// hyperradius.
#[derive(Clone, Debug)]
pub struct EvalPoint {
    pub x: Vec<BigRational>,
    pub p: Vec<BigRational>,
    /// Must equal `(Σ x_k²)^{1/2}`.
    pub r: BigRational,
}

impl EvalPoint {
    pub fn new(x: Vec<BigRational>, p: Vec<BigRational>, r: BigRational) -> Result<Self> {
        let r2: BigRational = x.iter().map(|v| v * v).fold(BigRational::zero(), |a, b| a + b);
        if &r * &r != r2 || r <= BigRational::zero() {
            return Err(Error::Contract("evaluation point hyperradius does not match its coordinates".into()));
        }
        if x.len() != p.len() {
            return Err(Error::Contract("position and momentum lengths differ".into()));
        }
        Ok(Self { x, p, r })
    }
}

fn rat_pow(base: &BigRational, e: i32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e.unsigned_abs() {
        acc *= base;
    }
    if e < 0 {
        acc.recip()
    } else {
        acc
    }
}

impl PhasePoly {
    /// Exact value at `point`, split by ħ order: entry `n` holds the
    /// coefficient of `ħ^n`. Zero entries are omitted.
    pub fn evaluate(&self, point: &EvalPoint) -> Result<BTreeMap<u32, GaussianRational>> {
        if point.x.len() != self.d.as_usize() {
            return Err(Error::Contract("evaluation point has wrong dimension".into()));
        }
        let mut out: BTreeMap<u32, GaussianRational> = BTreeMap::new();
        for (key, c) in &self.terms {
            let mut v = rat_pow(&point.r, key.r_pow);
            for (xk, &a) in point.x.iter().zip(&key.x_pows) {
                if a > 0 {
                    v *= rat_pow(xk, a as i32);
                }
            }
            for (pk, &b) in point.p.iter().zip(&key.p_pows) {
                if b > 0 {
                    v *= rat_pow(pk, b as i32);
                }
            }
            let entry = out.entry(key.hbar_pow).or_insert_with(GaussianRational::zero);
            *entry += &c.scale(&v);
        }
        out.retain(|_, v| !v.is_zero());
        Ok(out)
    }

    /// Floating-point value with ħ = 1 at a real point (`r` recomputed).
    pub fn evaluate_f64(&self, x: &[f64], p: &[f64]) -> (f64, f64) {
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut re = 0.0;
        let mut im = 0.0;
        for (key, c) in &self.terms {
            let mut v = r.powi(key.r_pow);
            for (xk, &a) in x.iter().zip(&key.x_pows) {
                v *= xk.powi(a as i32);
            }
            for (pk, &b) in p.iter().zip(&key.p_pows) {
                v *= pk.powi(b as i32);
            }
            re += v * ratio_to_f64(&c.re);
            im += v * ratio_to_f64(&c.im);
        }
        (re, im)
    }
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl fmt::Display for PhasePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (key, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            if key.hbar_pow > 0 {
                write!(f, "·ħ^{}", key.hbar_pow)?;
            }
            for (k, &a) in key.x_pows.iter().enumerate() {
                if a > 0 {
                    write!(f, "·x{}^{}", k + 1, a)?;
                }
            }
            for (k, &b) in key.p_pows.iter().enumerate() {
                if b > 0 {
                    write!(f, "·p{}^{}", k + 1, b)?;
                }
            }
            if key.r_pow != 0 {
                write!(f, "·r^{}", key.r_pow)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(d: u32) -> Dimension {
        Dimension::new(d).unwrap()
    }

    #[test]
    fn merging_drops_zero_terms() {
        let d = dim(3);
        let x = PhasePoly::x(d, 0);
        let diff = &x - &x;
        assert!(diff.is_zero());
        let two_x = &x + &x;
        assert_eq!(two_x.len(), 1);
    }

    #[test]
    fn derivative_of_radius_power() {
        let d = dim(3);
        // ∂r^{-1}/∂x_1 = -x_1 r^{-3}
        let dr = PhasePoly::r_pow(d, -1).d_x(0);
        let expected = (&PhasePoly::x(d, 0) * &PhasePoly::r_pow(d, -3)).scale_rational(-1, 1);
        assert_eq!(dr, expected);
        // ∂(x_1² r²)/∂x_1 = 2x_1 r² + 2x_1³
        let f = &PhasePoly::x(d, 0).pow(2) * &PhasePoly::r_pow(d, 2);
        let df = f.d_x(0);
        let expected = (&PhasePoly::x(d, 0) * &PhasePoly::r_pow(d, 2)).scale_rational(2, 1)
            + PhasePoly::x(d, 0).pow(3).scale_rational(2, 1);
        assert_eq!(df, expected);
    }

    #[test]
    fn momentum_derivative_lowers_degree() {
        let d = dim(2);
        let f = PhasePoly::p(d, 1).pow(3);
        assert_eq!(f.d_p(1), PhasePoly::p(d, 1).pow(2).scale_rational(3, 1));
        assert!(f.d_p(0).is_zero());
        assert_eq!(f.p_degree(), 3);
    }

    #[test]
    fn evaluation_uses_rational_radius() {
        let d = dim(2);
        // x = (3/5, 4/5)·2 so r = 2
        let point =
            EvalPoint::new(vec![rational(6, 5), rational(8, 5)], vec![rational(1, 2), rational(-1, 3)], rational(2, 1))
                .unwrap();
        let f = &PhasePoly::x(d, 0) * &PhasePoly::r_pow(d, -1);
        let v = f.evaluate(&point).unwrap();
        assert_eq!(v[&0], GaussianRational::from_ratio(3, 5));
        let bad = EvalPoint::new(vec![rational(1, 1), rational(1, 1)], vec![rational(0, 1); 2], rational(1, 1));
        assert!(bad.is_err());
    }

    #[test]
    fn dimension_mismatch_is_contract_violation() {
        let a = PhasePoly::x(dim(2), 0);
        let b = PhasePoly::x(dim(3), 0);
        assert!(matches!(a.try_add(&b), Err(Error::Contract(_))));
    }
}
