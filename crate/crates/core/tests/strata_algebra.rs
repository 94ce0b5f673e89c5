mod common;

use std::collections::BTreeMap;

use common::{random_element, random_homogeneous};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use trr_core::numerics::Rational;
use trr_core::strata::StrataElement;

#[test]
fn product_is_commutative_and_associative() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..25 {
        let (g, n) = if rng.gen_bool(0.5) { (1, 3) } else { (0, 6) };
        let x = random_element(&mut rng, g, n, 3);
        let y = random_element(&mut rng, g, n, 3);
        let z = random_element(&mut rng, g, n, 2);
        assert_eq!(x.multiply(&y).unwrap(), y.multiply(&x).unwrap());
        let left = x.multiply(&y).unwrap().multiply(&z).unwrap();
        let right = x.multiply(&y.multiply(&z).unwrap()).unwrap();
        assert_eq!(left, right);
    }
}

#[test]
fn product_distributes_and_has_unit() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..20 {
        let x = random_element(&mut rng, 1, 3, 3);
        let y = random_element(&mut rng, 1, 3, 3);
        let z = random_element(&mut rng, 1, 3, 3);
        let lhs = x.multiply(&y.add(&z).unwrap()).unwrap();
        let rhs = x.multiply(&y).unwrap().add(&x.multiply(&z).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(x.multiply(&StrataElement::unit(1, 3)).unwrap(), x);
    }
}

#[test]
fn degrees_add_under_product() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..30 {
        let d1 = rng.gen_range(0..=2);
        let d2 = rng.gen_range(0..=2);
        let x = random_homogeneous(&mut rng, 1, 3, d1);
        let y = random_homogeneous(&mut rng, 1, 3, d2);
        let p = x.multiply(&y).unwrap();
        assert!(p.terms().keys().all(|t| t.degree() == d1 + d2));
    }
}

#[test]
fn multiply_by_psi_matches_product() {
    let mut rng = StdRng::seed_from_u64(14);
    for _ in 0..40 {
        let (g, n) = (1, 3);
        let x = random_element(&mut rng, g, n, 4);
        let mut legs = BTreeMap::new();
        let mut exps = vec![0u32; n];
        for (i, e) in exps.iter_mut().enumerate() {
            *e = rng.gen_range(0..=1);
            if *e > 0 {
                legs.insert(i + 1, *e);
            }
        }
        let via_psi = x.multiply_by_psi(&legs).unwrap();
        let via_product = x.multiply(&StrataElement::psi_monomial(g, &exps)).unwrap();
        assert_eq!(via_psi, via_product);
    }
}

fn monomials(g: u32, n: usize, max: u32) -> Vec<Vec<u32>> {
    let dim = 3 * g + n as u32 - 3;
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|m: Vec<u32>| {
                (0..=max).map(move |e| {
                    let mut m = m.clone();
                    m.push(e);
                    m
                })
            })
            .collect();
    }
    out.retain(|m| m.iter().sum::<u32>() <= dim);
    out
}

#[test]
fn string_and_dilaton_equations() {
    for (g, n) in [(1u32, 1usize), (1, 2), (2, 1), (2, 2), (0, 3), (0, 4)] {
        for a in monomials(g, n, 3) {
            let mut with_last = a.clone();
            with_last.push(0);
            let pushed = StrataElement::psi_monomial(g, &with_last).pushforward_forget(n + 1).unwrap();
            assert!(!pushed.kappa_generated);
            let mut expected = StrataElement::zero(g, n);
            for i in 0..n {
                if a[i] > 0 {
                    let mut b = a.clone();
                    b[i] -= 1;
                    expected = expected.add(&StrataElement::psi_monomial(g, &b)).unwrap();
                }
            }
            assert_eq!(pushed.element, expected, "string equation at g={g} a={a:?}");

            with_last[n] = 1;
            let pushed = StrataElement::psi_monomial(g, &with_last).pushforward_forget(n + 1).unwrap();
            let chi = Rational::from(2 * g as i64 - 2 + n as i64);
            assert_eq!(pushed.element, StrataElement::psi_monomial(g, &a).scale(&chi), "dilaton at g={g} a={a:?}");
        }
    }
}

#[test]
fn forgetting_two_points_in_either_order() {
    let mut rng = StdRng::seed_from_u64(15);
    for _ in 0..40 {
        let (g, n) = if rng.gen_bool(0.5) { (1, 4) } else { (0, 6) };
        let x = random_element(&mut rng, g, n, 3);
        let last_first = x.pushforward_forget(n).unwrap().element.pushforward_forget(n - 1).unwrap().element;
        let other_first = x.pushforward_forget(n - 1).unwrap().element.pushforward_forget(n - 1).unwrap().element;
        assert_eq!(last_first, other_first);
    }
}

#[test]
fn cancellation_leaves_nothing() {
    let mut rng = StdRng::seed_from_u64(16);
    for _ in 0..200 {
        let (g, n) = [(0, 5), (1, 2), (1, 3), (2, 1)][rng.gen_range(0..4)];
        let x = random_element(&mut rng, g, n, 5);
        let y = random_element(&mut rng, g, n, 5);
        assert!(x.sub(&x).unwrap().is_zero());
        assert!(x.add(&x.scale(&Rational::from(-1))).unwrap().is_zero());
        assert_eq!(x.add(&y).unwrap().sub(&y).unwrap(), x);
        assert!(x.terms().values().all(|c| !c.is_zero()));
    }
}

#[test]
fn json_round_trip_of_random_elements() {
    let mut rng = StdRng::seed_from_u64(17);
    for _ in 0..50 {
        let x = random_element(&mut rng, 1, 3, 5);
        let back = StrataElement::from_json_value(1, 3, &x.to_json_value()).unwrap();
        assert_eq!(back, x);
    }
}
