use std::convert::Infallible;

use num_bigint::BigInt;
use proptest::prelude::*;
use trr_core::numerics::{
    binomial, elementary_symmetric_all, falling_factorial, interpolate_coeffs, tensor_grid_interpolate, Rational,
    SparsePoly,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12).prop_map(|(p, q)| Rational::new(p, q))
}

fn poly2() -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec(((0u32..4, 0u32..4), rational()), 0..6).prop_map(|terms| {
        let mut p = SparsePoly::zero(vec!["x".into(), "y".into()]);
        for ((a, b), c) in terms {
            p.add_term(vec![a, b], c);
        }
        p
    })
}

proptest! {
    #[test]
    fn chu_vandermonde(m in -12i64..20, n in -12i64..20, k in 0i64..16) {
        let sum: BigInt = (0..=k).map(|j| binomial(m, j) * binomial(n, k - j)).sum();
        prop_assert_eq!(sum, binomial(m + n, k));
    }

    #[test]
    fn pascal_rule(a in -20i64..30, b in 1i64..20) {
        prop_assert_eq!(binomial(a, b), binomial(a - 1, b - 1) + binomial(a - 1, b));
    }

    #[test]
    fn falling_factorial_is_binomial_times_factorial(a in 0u64..25, b in 0u64..25) {
        let fact: BigInt = (1..=b).map(BigInt::from).product();
        prop_assert_eq!(falling_factorial(a, b), binomial(a as i64, b as i64) * fact);
    }

    #[test]
    fn elementary_symmetric_matches_subset_sum(values in prop::collection::vec(rational(), 0..8)) {
        let e = elementary_symmetric_all(&values);
        let mut brute = vec![Rational::zero(); values.len() + 1];
        for mask in 0u32..(1 << values.len()) {
            let prod: Rational = (0..values.len()).filter(|j| mask >> j & 1 == 1).map(|j| values[j].clone()).product();
            brute[mask.count_ones() as usize] += prod;
        }
        prop_assert_eq!(e, brute);
    }

    #[test]
    fn rational_field_laws(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        if !a.is_zero() {
            prop_assert!((&a * a.recip()).is_one());
        }
        let round: Rational = a.to_string().parse().unwrap();
        prop_assert_eq!(round, a);
    }

    #[test]
    fn interpolation_is_stable_under_extra_nodes(
        coeffs in prop::collection::vec(rational(), 1..7),
        shift in -5i64..5,
        extra in 0usize..4,
    ) {
        let eval = |x: &Rational| coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c);
        let nodes = |count: usize| -> Vec<(Rational, Rational)> {
            (0..count as i64).map(|i| {
                let x = Rational::from(i + shift);
                let y = eval(&x);
                (x, y)
            }).collect()
        };
        let mut expected = coeffs.clone();
        while expected.last().is_some_and(Rational::is_zero) {
            expected.pop();
        }
        prop_assert_eq!(interpolate_coeffs(&nodes(coeffs.len())).unwrap(), expected.clone());
        prop_assert_eq!(interpolate_coeffs(&nodes(coeffs.len() + extra)).unwrap(), expected);
    }

    #[test]
    fn tensor_grid_recovers_polynomials(p in poly2()) {
        let q = tensor_grid_interpolate::<Infallible>(vec!["x".into(), "y".into()], &[3, 3], |pt| {
            Ok(p.eval(&[Rational::from(pt[0]), Rational::from(pt[1])]))
        }).unwrap();
        prop_assert_eq!(q, p);
    }

    #[test]
    fn polynomial_product_laws(p in poly2(), q in poly2(), r in poly2()) {
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert!(p.sub(&p).is_zero());
        if let (Some(a), Some(b)) = (p.degree(), q.degree()) {
            prop_assert_eq!(p.mul(&q).degree(), Some(a + b));
        }
    }
}
