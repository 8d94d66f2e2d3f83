//! The Moyal star product.
//!
//! ```text
//! a ⋆ b = Σ_k (iħ/2)^k / k! · [(∂_x^a·∂_p^b − ∂_p^a·∂_x^b)]^k a b
//!       = Σ_{α,β} (iħ/2)^{|α|+|β|} (−1)^{|β|} / (α! β!) · (∂_x^α ∂_p^β a)(∂_p^α ∂_x^β b)
//! ```
//!
//! with multi-indices `α, β ∈ ℕ^D`. The sum is finite because `∂_p^α b`
//! vanishes once `α` exceeds the momentum exponents of `b` (and likewise for
//! `β` and `a`).

use num_bigint::BigInt;
use num_rational::BigRational;

use super::poly::{differentiate_p, differentiate_x, MonomialKey, PhasePoly};
use super::rational::GaussianRational;
use crate::error::Result;

/// Every multi-index componentwise `≤ bound`.
fn multi_indices(bound: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::with_capacity(bound.len())];
    for &b in bound {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=b).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn multi_factorial(idx: &[u32]) -> BigInt {
    idx.iter().map(|&v| factorial(v)).product()
}

/// `∂_p^β` of a single monomial.
fn p_derivative(key: &MonomialKey, c: &GaussianRational, beta: &[u32]) -> Option<(MonomialKey, GaussianRational)> {
    let mut cur = (key.clone(), c.clone());
    for (k, &n) in beta.iter().enumerate() {
        if n > 0 {
            cur = differentiate_p(&cur.0, &cur.1, k, n)?;
        }
    }
    Some(cur)
}

/// `∂_x^α` of a single monomial, as a polynomial.
fn x_derivative(poly: PhasePoly, alpha: &[u32]) -> PhasePoly {
    let mut cur = poly;
    for (k, &n) in alpha.iter().enumerate() {
        for _ in 0..n {
            if cur.is_zero() {
                return cur;
            }
            let mut next = PhasePoly::zero(cur.dim());
            for (key, c) in cur.terms() {
                differentiate_x(key, c, k, &mut next);
            }
            cur = next;
        }
    }
    cur
}

/// Moyal product `a ⋆ b`. Exact; errors only on a dimension mismatch.
pub fn star(a: &PhasePoly, b: &PhasePoly) -> Result<PhasePoly> {
    a.check_dim(b)?;
    let d = a.dim();
    let mut out = PhasePoly::zero(d);
    for (ka, ca) in a.terms() {
        let betas = multi_indices(&ka.p_pows);
        for (kb, cb) in b.terms() {
            let alphas = multi_indices(&kb.p_pows);
            for beta in &betas {
                let Some((la_key, la_c)) = p_derivative(ka, ca, beta) else { continue };
                let beta_len: u32 = beta.iter().sum();
                let beta_fact = multi_factorial(beta);
                for alpha in &alphas {
                    let Some((rb_key, rb_c)) = p_derivative(kb, cb, alpha) else { continue };
                    let alpha_len: u32 = alpha.iter().sum();
                    let order = alpha_len + beta_len;

                    let left = x_derivative(PhasePoly::monomial(d, la_c.clone(), la_key.clone()), alpha);
                    if left.is_zero() {
                        continue;
                    }
                    let right = x_derivative(PhasePoly::monomial(d, rb_c, rb_key), beta);
                    if right.is_zero() {
                        continue;
                    }

                    // (i/2)^order (−1)^{|β|} / (α! β!)
                    let mut den = multi_factorial(alpha) * &beta_fact;
                    den *= BigInt::from(2u32).pow(order);
                    let sign = if beta_len.is_multiple_of(2) { 1 } else { -1 };
                    let factor =
                        GaussianRational::i_pow(order as usize).scale(&BigRational::new(BigInt::from(sign), den));
                    for (pk, pc) in left.try_mul(&right)?.terms() {
                        let mut key = pk.clone();
                        key.hbar_pow += order;
                        out.add_term(key, pc * &factor);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Moyal bracket's leading part: `(a ⋆ b − b ⋆ a)` restricted to first
/// order in ħ.
pub fn commutator_first_order(a: &PhasePoly, b: &PhasePoly) -> Result<PhasePoly> {
    let ab = star(a, b)?;
    let ba = star(b, a)?;
    Ok((&ab - &ba).hbar_order(1))
}

/// Poisson bracket `{a, b} = Σ_k ∂a/∂x_k ∂b/∂p_k − ∂a/∂p_k ∂b/∂x_k`.
pub fn poisson_bracket(a: &PhasePoly, b: &PhasePoly) -> Result<PhasePoly> {
    a.check_dim(b)?;
    let mut out = PhasePoly::zero(a.dim());
    for k in 0..a.dim().as_usize() {
        out = &out + &(&a.d_x(k) * &b.d_p(k));
        out = &out - &(&a.d_p(k) * &b.d_x(k));
    }
    Ok(out)
}
