//! Operators of the central-field problem as operator words, and their
//! classical-like phase-space counterparts.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::PhasePoly;
use super::rational::GaussianRational;
use super::word::{Factor, OperatorSum, OperatorWord};
use crate::error::{Error, Result};
use crate::geometry::Dimension;

fn inverse_two_mass(mass: &BigRational) -> Result<GaussianRational> {
    if *mass <= BigRational::zero() {
        return Err(Error::Domain("mass must be positive".into()));
    }
    Ok(GaussianRational::real((mass * BigRational::from_integer(BigInt::from(2))).recip()))
}

fn check_pair(d: Dimension, i: usize, j: usize) -> Result<()> {
    let n = d.as_usize();
    if i >= n || j >= n || i == j {
        return Err(Error::Contract(format!("invalid index pair ({i}, {j}) for D = {d}")));
    }
    Ok(())
}

/// `L̂_ij = x_i p̂_j − x_j p̂_i`.
pub fn angular_momentum_op(d: Dimension, i: usize, j: usize) -> Result<OperatorSum> {
    check_pair(d, i, j)?;
    let mut op = OperatorSum::zero(d);
    op.push(
        GaussianRational::one(),
        OperatorWord::new(d, vec![Factor::Position(PhasePoly::x(d, i)), Factor::Momentum(j)])?,
    )?;
    op.push(
        GaussianRational::from_int(-1),
        OperatorWord::new(d, vec![Factor::Position(PhasePoly::x(d, j)), Factor::Momentum(i)])?,
    )?;
    Ok(op)
}

/// `L̂² = ½ Σ_{i≠j} L̂_ij²`.
pub fn l_squared_op(d: Dimension) -> Result<OperatorSum> {
    let n = d.as_usize();
    let half = GaussianRational::from_ratio(1, 2);
    let mut total = OperatorSum::zero(d);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let l = angular_momentum_op(d, i, j)?;
            total = total + l.compose(&l)?.scale(&half);
        }
    }
    Ok(total)
}

/// `T̂ = p̂²/2M`.
pub fn kinetic_op(d: Dimension, mass: &BigRational) -> Result<OperatorSum> {
    let c = inverse_two_mass(mass)?;
    let mut op = OperatorSum::zero(d);
    for k in 0..d.as_usize() {
        op.push(c.clone(), OperatorWord::new(d, vec![Factor::Momentum(k), Factor::Momentum(k)])?)?;
    }
    Ok(op)
}

/// `T̂_rad = (1/2M) (p̂·r/r)(r/r·p̂) = (1/2M) Σ_{k,l} p̂_k (x_k x_l/r²) p̂_l`.
pub fn radial_kinetic_op(d: Dimension, mass: &BigRational) -> Result<OperatorSum> {
    let c = inverse_two_mass(mass)?;
    let n = d.as_usize();
    let mut op = OperatorSum::zero(d);
    for k in 0..n {
        for l in 0..n {
            let f = &(&PhasePoly::x(d, k) * &PhasePoly::x(d, l)) * &PhasePoly::r_pow(d, -2);
            op.push(
                c.clone(),
                OperatorWord::new(d, vec![Factor::Momentum(k), Factor::Position(f), Factor::Momentum(l)])?,
            )?;
        }
    }
    Ok(op)
}

/// `T̂_ang = L̂²/(2M r²)`.
pub fn angular_kinetic_op(d: Dimension, mass: &BigRational) -> Result<OperatorSum> {
    let c = inverse_two_mass(mass)?;
    let inv_r2 = OperatorSum::from_word(OperatorWord::position(PhasePoly::r_pow(d, -2))?);
    Ok(l_squared_op(d)?.compose(&inv_r2)?.scale(&c))
}

/// Radial momentum `p̂_r = ½ (r/r·p̂ + p̂·r/r)`.
pub fn radial_momentum_op(d: Dimension) -> Result<OperatorSum> {
    let half = GaussianRational::from_ratio(1, 2);
    let mut op = OperatorSum::zero(d);
    for k in 0..d.as_usize() {
        let unit = &PhasePoly::x(d, k) * &PhasePoly::r_pow(d, -1);
        op.push(half.clone(), OperatorWord::new(d, vec![Factor::Position(unit.clone()), Factor::Momentum(k)])?)?;
        op.push(half.clone(), OperatorWord::new(d, vec![Factor::Momentum(k), Factor::Position(unit)])?)?;
    }
    Ok(op)
}

/// `Λ_ij = x_i p_j − x_j p_i`.
pub fn lambda_ij(d: Dimension, i: usize, j: usize) -> Result<PhasePoly> {
    check_pair(d, i, j)?;
    Ok(&(&PhasePoly::x(d, i) * &PhasePoly::p(d, j)) - &(&PhasePoly::x(d, j) * &PhasePoly::p(d, i)))
}

/// `Λ² = ½ Σ_{i≠j} Λ_ij²`.
pub fn lambda_squared(d: Dimension) -> Result<PhasePoly> {
    let n = d.as_usize();
    let mut acc = PhasePoly::zero(d);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = &acc + &lambda_ij(d, i, j)?.pow(2);
            }
        }
    }
    Ok(acc.scale_rational(1, 2))
}

/// `r·p`.
pub fn r_dot_p(d: Dimension) -> PhasePoly {
    (0..d.as_usize()).fold(PhasePoly::zero(d), |acc, k| &acc + &(&PhasePoly::x(d, k) * &PhasePoly::p(d, k)))
}

/// `p²`.
pub fn p_squared(d: Dimension) -> PhasePoly {
    (0..d.as_usize()).fold(PhasePoly::zero(d), |acc, k| &acc + &PhasePoly::p(d, k).pow(2))
}

/// `(r·p)/r`, the Weyl symbol of `p̂_r`.
pub fn classical_radial_momentum(d: Dimension) -> PhasePoly {
    &r_dot_p(d) * &PhasePoly::r_pow(d, -1)
}

/// `T^c = p²/2M`.
pub fn classical_kinetic(d: Dimension, mass: &BigRational) -> Result<PhasePoly> {
    Ok(p_squared(d).scale(&inverse_two_mass(mass)?))
}

/// `T^c_rad = (r·p)²/(2M r²)`.
pub fn classical_radial_kinetic(d: Dimension, mass: &BigRational) -> Result<PhasePoly> {
    let f = &r_dot_p(d).pow(2) * &PhasePoly::r_pow(d, -2);
    Ok(f.scale(&inverse_two_mass(mass)?))
}

/// `T^c_ang = Λ²/(2M r²)`.
pub fn classical_angular_kinetic(d: Dimension, mass: &BigRational) -> Result<PhasePoly> {
    let f = &lambda_squared(d)? * &PhasePoly::r_pow(d, -2);
    Ok(f.scale(&inverse_two_mass(mass)?))
}

/// `c · ħ^n · r^m` with rational `c`.
pub fn hbar_radial_term(d: Dimension, c: BigRational, hbar: u32, r: i32) -> PhasePoly {
    (&PhasePoly::hbar_pow(d, hbar) * &PhasePoly::r_pow(d, r)).scale(&GaussianRational::real(c))
}

/// `(D−1)(D−2)ħ²/(8M r²)`, the gap between `Weyl(T̂_rad)` and `T^c_rad`.
pub fn radial_kinetic_offset(d: Dimension, mass: &BigRational) -> Result<PhasePoly> {
    if *mass <= BigRational::zero() {
        return Err(Error::Domain("mass must be positive".into()));
    }
    let n = i64::from(d.get());
    let c = BigRational::new(BigInt::from((n - 1) * (n - 2)), BigInt::from(8)) / mass;
    Ok(hbar_radial_term(d, c, 2, -2))
}

/// `D(D−1)ħ²/4`, the gap between `Λ²` and `Weyl(L̂²)`.
pub fn angular_momentum_offset(d: Dimension) -> PhasePoly {
    let n = i64::from(d.get());
    hbar_radial_term(d, BigRational::new(BigInt::from(n * (n - 1)), BigInt::from(4)), 2, 0)
}

/// `Weyl(L̂²)`.
pub fn weyl_l_squared(d: Dimension) -> Result<PhasePoly> {
    l_squared_op(d)?.weyl()
}

/// `(Weyl(T̂_rad), Weyl(T̂_ang))`.
pub fn weyl_kinetic_split(d: Dimension, mass: &BigRational) -> Result<(PhasePoly, PhasePoly)> {
    Ok((radial_kinetic_op(d, mass)?.weyl()?, angular_kinetic_op(d, mass)?.weyl()?))
}

/// The dyad `S_kl = x_k x_l`.
pub fn s_matrix(d: Dimension) -> Vec<Vec<PhasePoly>> {
    let n = d.as_usize();
    (0..n).map(|k| (0..n).map(|l| &PhasePoly::x(d, k) * &PhasePoly::x(d, l)).collect()).collect()
}

/// `(T^{ij})_kl = x_i² δ_kj δ_lj + x_j² δ_ki δ_li − x_i x_j (δ_ki δ_lj + δ_kj δ_li)`.
pub fn t_matrix(d: Dimension, i: usize, j: usize) -> Result<Vec<Vec<PhasePoly>>> {
    check_pair(d, i, j)?;
    let n = d.as_usize();
    let delta = |a: usize, b: usize| i64::from(a == b);
    let xi2 = PhasePoly::x(d, i).pow(2);
    let xj2 = PhasePoly::x(d, j).pow(2);
    let xixj = &PhasePoly::x(d, i) * &PhasePoly::x(d, j);
    Ok((0..n)
        .map(|k| {
            (0..n)
                .map(|l| {
                    let mut e = xi2.scale_rational(delta(k, j) * delta(l, j), 1);
                    e = &e + &xj2.scale_rational(delta(k, i) * delta(l, i), 1);
                    &e - &xixj.scale_rational(delta(k, i) * delta(l, j) + delta(k, j) * delta(l, i), 1)
                })
                .collect()
        })
        .collect())
}

/// Entrywise `S/r² + ½ Σ_{i≠j} T^{ij}/r² − 1`; every entry vanishes as a
/// function.
pub fn resolve_identity_residual(d: Dimension) -> Result<Vec<Vec<PhasePoly>>> {
    let n = d.as_usize();
    let inv_r2 = PhasePoly::r_pow(d, -2);
    let mut acc = s_matrix(d);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let t = t_matrix(d, i, j)?;
            for k in 0..n {
                for l in 0..n {
                    acc[k][l] = &acc[k][l] + &t[k][l].scale_rational(1, 2);
                }
            }
        }
    }
    for (k, row) in acc.iter_mut().enumerate() {
        for (l, e) in row.iter_mut().enumerate() {
            *e = &*e * &inv_r2;
            if k == l {
                *e = &*e - &PhasePoly::constant(d, GaussianRational::real(BigRational::one()));
            }
        }
    }
    Ok(acc)
}
