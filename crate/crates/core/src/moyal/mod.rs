//! Exact Weyl correspondence.
//!
//! Phase-space functions ([`PhasePoly`]) are polynomials in `x_k`, `p_k`
//! and a formal ħ, times integer powers of `r`, with Gaussian-rational
//! coefficients. Operators are linear combinations of ordered words
//! ([`OperatorWord`]); their Weyl symbols come from folding the star product
//! over the factors. Identities between symbols are decided by exact random
//! evaluation ([`identity_check`]).

mod operators;
mod poly;
mod rational;
mod star;
mod verify;
mod word;

pub use operators::*;
pub use poly::{EvalPoint, MonomialKey, PhaseMonomial, PhasePoly};
pub use rational::GaussianRational;
pub use star::{commutator_first_order, poisson_bracket, star};
pub use verify::{
    identities, identity_check, random_point, verify_suite, IdentityRecord, IdentityStatus, NamedIdentity, SuiteOptions,
};
pub use word::{weyl_of_word, Factor, OperatorSum, OperatorWord};

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::One;
    use proptest::prelude::*;

    use super::*;
    use crate::geometry::Dimension;

    fn dim(d: u32) -> Dimension {
        Dimension::new(d).unwrap()
    }

    fn one() -> BigRational {
        BigRational::one()
    }

    fn hbar_r(d: Dimension, num: i64, den: i64, r: i32) -> PhasePoly {
        hbar_radial_term(d, BigRational::new(BigInt::from(num), BigInt::from(den)), 2, r)
    }

    #[test]
    fn canonical_commutator() {
        for n in 2..=4 {
            let d = dim(n);
            for k in 0..n as usize {
                let x = PhasePoly::x(d, k);
                let p = PhasePoly::p(d, k);
                let c = &star(&x, &p).unwrap() - &star(&p, &x).unwrap();
                assert_eq!(c, PhasePoly::hbar_pow(d, 1).scale(&GaussianRational::i()));
            }
        }
    }

    #[test]
    fn position_functions_multiply_plainly() {
        let d = dim(3);
        let f = &PhasePoly::x(d, 0).pow(2) * &PhasePoly::r_pow(d, -3);
        let g = &PhasePoly::x(d, 2) * &PhasePoly::r_pow(d, 5);
        assert_eq!(star(&f, &g).unwrap(), &f * &g);
    }

    #[test]
    fn lambda_ij_star_square() {
        let d = dim(3);
        let l = lambda_ij(d, 0, 1).unwrap();
        let got = star(&l, &l).unwrap();
        let expected = &l.pow(2) - &PhasePoly::hbar_pow(d, 2).scale_rational(1, 2);
        assert!(identity_check(&got, &expected, 5, 1).unwrap());
        // the words for L̂_ij give the same symbol as starring Λ_ij directly
        let w = angular_momentum_op(d, 0, 1).unwrap();
        assert_eq!(w.weyl().unwrap(), l);
    }

    #[test]
    fn weyl_of_single_factor() {
        let d = dim(4);
        let w = OperatorWord::momentum(d, 2).unwrap();
        assert_eq!(weyl_of_word(&w).unwrap(), PhasePoly::p(d, 2));
        assert_eq!(weyl_of_word(&OperatorWord::identity(d)).unwrap(), PhasePoly::one(d));
    }

    #[test]
    fn word_rejects_momentum_in_position_factor() {
        let d = dim(2);
        let res = OperatorWord::new(d, vec![Factor::Position(PhasePoly::p(d, 0))]);
        assert!(matches!(res, Err(crate::Error::Contract(_))));
        assert!(OperatorWord::momentum(d, 2).is_err());
    }

    #[test]
    fn radial_momentum_symbols() {
        for n in 2..=6 {
            let d = dim(n);
            let pr = radial_momentum_op(d).unwrap();
            assert!(identity_check(&pr.weyl().unwrap(), &classical_radial_momentum(d), 10, 7).unwrap());
            let pr2 = pr.compose(&pr).unwrap().weyl().unwrap();
            let expected = &classical_radial_momentum(d).pow(2) + &hbar_r(d, i64::from(n) - 1, 4, -2);
            assert!(identity_check(&pr2, &expected, 10, 7).unwrap(), "D={n}");
        }
    }

    #[test]
    fn l_squared_offsets() {
        // D=3: Λ² − 3ħ²/2, D=2: Λ² − ħ²/2, D=5: Λ² − 5ħ²
        for (n, num, den) in [(2u32, 1i64, 2i64), (3, 3, 2), (5, 5, 1)] {
            let d = dim(n);
            let expected = &lambda_squared(d).unwrap() - &hbar_r(d, num, den, 0);
            assert!(identity_check(&weyl_l_squared(d).unwrap(), &expected, 20, 3).unwrap(), "D={n}");
        }
    }

    #[test]
    fn l_squared_without_offset_is_not_the_symbol() {
        let d = dim(3);
        assert!(!identity_check(&lambda_squared(d).unwrap(), &weyl_l_squared(d).unwrap(), 5, 11).unwrap());
    }

    #[test]
    fn identity_check_of_same_object() {
        let d = dim(4);
        let f = lambda_squared(d).unwrap();
        assert!(identity_check(&f, &f, 1, 0).unwrap());
        assert!(identity_check(&f, &f, 0, 0).is_err());
    }

    #[test]
    fn l_squared_in_four_dimensions() {
        let d = dim(4);
        let expected = &lambda_squared(d).unwrap() - &angular_momentum_offset(d);
        assert!(identity_check(&weyl_l_squared(d).unwrap(), &expected, 20, 99).unwrap());
    }

    #[test]
    fn radial_kinetic_offsets() {
        // D=3: ħ²/(4r²), D=2: 0, D=6: 5ħ²/(2r²), all with M=1
        for (n, num, den) in [(3u32, 1i64, 4i64), (2, 0, 1), (6, 5, 2)] {
            let d = dim(n);
            let (t_rad, t_ang) = weyl_kinetic_split(d, &one()).unwrap();
            let offset = &t_rad - &classical_radial_kinetic(d, &one()).unwrap();
            assert!(identity_check(&offset, &hbar_r(d, num, den, -2), 10, 5).unwrap(), "D={n}");
            let sum = &t_rad + &t_ang;
            assert!(identity_check(&sum, &classical_kinetic(d, &one()).unwrap(), 10, 5).unwrap());
        }
    }

    #[test]
    fn kinetic_split_scales_with_mass() {
        let d = dim(3);
        let mass = BigRational::new(BigInt::from(3), BigInt::from(7));
        let (t_rad, _) = weyl_kinetic_split(d, &mass).unwrap();
        let expected = &classical_radial_kinetic(d, &mass).unwrap() + &radial_kinetic_offset(d, &mass).unwrap();
        assert!(identity_check(&t_rad, &expected, 10, 5).unwrap());
        assert!(weyl_kinetic_split(d, &BigRational::from_integer(0.into())).is_err());
    }

    #[test]
    fn hermitian_words_have_real_symbols() {
        for n in 2..=4 {
            let d = dim(n);
            let (t_rad, t_ang) = weyl_kinetic_split(d, &one()).unwrap();
            assert!(t_rad.is_real(), "T_rad D={n}");
            assert!(t_ang.is_real(), "T_ang D={n}");
            assert!(weyl_l_squared(d).unwrap().is_real());
            let pr = radial_momentum_op(d).unwrap();
            assert!(pr.weyl().unwrap().is_real());
            assert!(pr.compose(&pr).unwrap().weyl().unwrap().is_real());
        }
    }

    #[test]
    fn resolution_of_identity() {
        for n in 2..=5 {
            let d = dim(n);
            for (k, row) in resolve_identity_residual(d).unwrap().iter().enumerate() {
                for (l, e) in row.iter().enumerate() {
                    assert!(identity_check(e, &PhasePoly::zero(d), 5, 2).unwrap(), "D={n} ({k},{l})");
                }
            }
        }
    }

    #[test]
    fn full_suite_passes_and_negative_control_fails() {
        let dims = (2..=6).map(dim).collect();
        let records = verify_suite(&SuiteOptions::new(dims, 4, 2024)).unwrap();
        assert!(records.iter().all(|r| r.status == IdentityStatus::Pass), "{records:?}");
        let mut opts = SuiteOptions::new(vec![dim(3)], 4, 2024);
        opts.omit_offsets = true;
        let records = verify_suite(&opts).unwrap();
        let failed: Vec<_> =
            records.iter().filter(|r| r.status == IdentityStatus::Fail).map(|r| r.identity_name.as_str()).collect();
        assert!(failed.contains(&"L_squared"));
        assert!(failed.contains(&"T_rad"));
        assert!(failed.contains(&"T_ang"));
    }

    fn small_poly(d: Dimension, spec: &[(i64, Vec<u32>, Vec<u32>, i32)]) -> PhasePoly {
        let mut out = PhasePoly::zero(d);
        for (c, xs, ps, r) in spec {
            let key = MonomialKey { hbar_pow: 0, x_pows: xs.clone(), p_pows: ps.clone(), r_pow: *r };
            out.add_term(key, GaussianRational::from_int(*c));
        }
        out
    }

    fn arb_poly(n: usize) -> impl Strategy<Value = Vec<(i64, Vec<u32>, Vec<u32>, i32)>> {
        // Each monomial: small coefficient, x-degree ≤ 2 per axis, total
        // p-degree ≤ 3, |r_pow| ≤ 2.
        let mono = (-3i64..=3, prop::collection::vec(0u32..=2, n), prop::collection::vec(0u32..=1, n), -2i32..=2)
            .prop_filter("p-degree at most 3", |(_, _, p, _)| p.iter().sum::<u32>() <= 3);
        prop::collection::vec(mono, 1..=2)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(25))]

        #[test]
        fn star_is_associative_2d(a in arb_poly(2), b in arb_poly(2), c in arb_poly(2)) {
            let d = dim(2);
            let (a, b, c) = (small_poly(d, &a), small_poly(d, &b), small_poly(d, &c));
            let left = star(&star(&a, &b).unwrap(), &c).unwrap();
            let right = star(&a, &star(&b, &c).unwrap()).unwrap();
            prop_assert!(identity_check(&left, &right, 3, 17).unwrap());
        }

        #[test]
        fn star_is_associative_3d(a in arb_poly(3), b in arb_poly(3), c in arb_poly(3)) {
            let d = dim(3);
            let (a, b, c) = (small_poly(d, &a), small_poly(d, &b), small_poly(d, &c));
            let left = star(&star(&a, &b).unwrap(), &c).unwrap();
            let right = star(&a, &star(&b, &c).unwrap()).unwrap();
            prop_assert!(identity_check(&left, &right, 3, 17).unwrap());
        }

        #[test]
        fn first_order_commutator_is_poisson_bracket(a in arb_poly(3), b in arb_poly(3)) {
            let d = dim(3);
            let (a, b) = (small_poly(d, &a), small_poly(d, &b));
            let lhs = commutator_first_order(&a, &b).unwrap();
            let rhs = (&poisson_bracket(&a, &b).unwrap() * &PhasePoly::hbar_pow(d, 1)).scale(&GaussianRational::i());
            prop_assert!(identity_check(&lhs, &rhs, 3, 5).unwrap());
        }

        #[test]
        fn reversed_word_gives_conjugate_symbol(a in arb_poly(2), k in 0usize..2, l in 0usize..2) {
            // Weyl(W†) = conj(Weyl(W)) for real position factors.
            let d = dim(2);
            let mut f = small_poly(d, &a);
            f = PhasePoly::zero(d).try_add(&f).unwrap();
            let pos: PhasePoly = f.terms()
                .filter(|(key, _)| key.p_degree() == 0)
                .fold(PhasePoly::zero(d), |acc, (key, c)| &acc + &PhasePoly::monomial(d, c.clone(), key.clone()));
            let w = OperatorWord::new(d, vec![Factor::Momentum(k), Factor::Position(pos), Factor::Momentum(l)]).unwrap();
            let fwd = weyl_of_word(&w).unwrap();
            let back = weyl_of_word(&w.reversed()).unwrap();
            prop_assert!(identity_check(&back, &fwd.conj(), 3, 9).unwrap());
        }
    }
}
