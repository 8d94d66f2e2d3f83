use std::ops::{Add, Mul};

use super::poly::PhasePoly;
use super::rational::GaussianRational;
use super::star::star;
use crate::error::{Error, Result};
use crate::geometry::Dimension;

/// One factor of an ordered operator product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    /// `p̂_k` (0-based component).
    Momentum(usize),
    /// Multiplication by a function of position only.
    Position(PhasePoly),
}

/// Ordered product of momentum components and position functions, e.g.
/// `p̂_k (x_k x_l / r²) p̂_l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorWord {
    d: Dimension,
    factors: Vec<Factor>,
}

impl OperatorWord {
    pub fn new(d: Dimension, factors: Vec<Factor>) -> Result<Self> {
        for f in &factors {
            match f {
                Factor::Momentum(k) if *k >= d.as_usize() => {
                    return Err(Error::Contract(format!("momentum component {k} out of range for D = {d}")));
                }
                Factor::Position(poly) => {
                    if poly.dim() != d {
                        return Err(Error::Contract("position factor has wrong dimension".into()));
                    }
                    if !poly.is_momentum_free() {
                        return Err(Error::Contract("position factor depends on momentum".into()));
                    }
                }
                _ => {}
            }
        }
        Ok(Self { d, factors })
    }

    pub fn identity(d: Dimension) -> Self {
        Self { d, factors: Vec::new() }
    }

    pub fn momentum(d: Dimension, k: usize) -> Result<Self> {
        Self::new(d, vec![Factor::Momentum(k)])
    }

    pub fn position(f: PhasePoly) -> Result<Self> {
        Self::new(f.dim(), vec![Factor::Position(f)])
    }

    pub fn dim(&self) -> Dimension {
        self.d
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Concatenation `self · other`.
    pub fn then(&self, other: &OperatorWord) -> Result<OperatorWord> {
        if self.d != other.d {
            return Err(Error::Contract("operator words of different dimension".into()));
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(OperatorWord { d: self.d, factors })
    }

    /// The word with its factors in reverse order (the adjoint, for real
    /// position functions).
    pub fn reversed(&self) -> OperatorWord {
        OperatorWord { d: self.d, factors: self.factors.iter().rev().cloned().collect() }
    }
}

/// Weyl symbol of an ordered product: the left fold of the factors' symbols
/// under the star product, with `p̂_k ↦ p_k` and `f(x̂) ↦ f(x)`.
pub fn weyl_of_word(w: &OperatorWord) -> Result<PhasePoly> {
    let mut acc = PhasePoly::one(w.d);
    for f in &w.factors {
        let symbol = match f {
            Factor::Momentum(k) => PhasePoly::p(w.d, *k),
            Factor::Position(poly) => poly.clone(),
        };
        acc = star(&acc, &symbol)?;
    }
    Ok(acc)
}

/// Linear combination of operator words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorSum {
    d: Dimension,
    terms: Vec<(GaussianRational, OperatorWord)>,
}

impl OperatorSum {
    pub fn zero(d: Dimension) -> Self {
        Self { d, terms: Vec::new() }
    }

    pub fn from_word(w: OperatorWord) -> Self {
        Self { d: w.d, terms: vec![(GaussianRational::one(), w)] }
    }

    pub fn dim(&self) -> Dimension {
        self.d
    }

    pub fn terms(&self) -> &[(GaussianRational, OperatorWord)] {
        &self.terms
    }

    pub fn push(&mut self, coeff: GaussianRational, w: OperatorWord) -> Result<()> {
        if w.d != self.d {
            return Err(Error::Contract("operator word of different dimension".into()));
        }
        if !coeff.is_zero() {
            self.terms.push((coeff, w));
        }
        Ok(())
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self { d: self.d, terms: self.terms.iter().map(|(k, w)| (k * c, w.clone())).collect() }
    }

    /// Operator product, distributed over both sums.
    pub fn compose(&self, other: &OperatorSum) -> Result<OperatorSum> {
        let mut out = OperatorSum::zero(self.d);
        for (ca, wa) in &self.terms {
            for (cb, wb) in &other.terms {
                out.push(ca * cb, wa.then(wb)?)?;
            }
        }
        Ok(out)
    }

    pub fn weyl(&self) -> Result<PhasePoly> {
        let mut acc = PhasePoly::zero(self.d);
        for (c, w) in &self.terms {
            acc = acc.try_add(&weyl_of_word(w)?.scale(c))?;
        }
        Ok(acc)
    }
}

impl Add for OperatorSum {
    type Output = OperatorSum;

    fn add(mut self, rhs: OperatorSum) -> OperatorSum {
        assert_eq!(self.d, rhs.d, "dimension mismatch in operator sum");
        self.terms.extend(rhs.terms);
        self
    }
}

impl Mul for &OperatorSum {
    type Output = OperatorSum;

    fn mul(self, rhs: &OperatorSum) -> OperatorSum {
        self.compose(rhs).expect("dimension mismatch in operator product")
    }
}
