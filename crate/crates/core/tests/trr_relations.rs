use proptest::prelude::*;
use trr_core::numerics::{interpolate_coeffs, Rational};
use trr_core::pixton::{pixton_constant_term, AVector};
use trr_core::stablegraphs::StableGraph;
use trr_core::strata::{DecoratedGraph, StrataElement};
use trr_core::trr::{
    assemble_full_trr, d_value, d_value_direct, principal_part, scan_zeros_filtered, ScaleGuard, TrrError,
};

fn target() -> impl Strategy<Value = (u32, u32, Vec<u32>)> {
    (2u32..=9, prop::collection::vec(1u32..=3, 1..=4)).prop_filter_map("k >= 1", |(g, l)| {
        let s: u32 = l.iter().sum();
        (s < g).then(|| (g, g - s, l))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_is_symmetric_in_l((g, k, l) in target(), seed in any::<u64>()) {
        let mut shuffled = l.clone();
        let len = shuffled.len();
        shuffled.rotate_left((seed as usize) % len);
        if seed % 2 == 1 {
            shuffled.reverse();
        }
        let d = d_value(g, k, &l).unwrap();
        prop_assert_eq!(&d, &d_value(g, k, &shuffled).unwrap());
        prop_assert_eq!(d, d_value_direct(g, k, &l).unwrap());
    }

    #[test]
    fn principal_part_is_normalized((g, k, mut l) in target()) {
        l.sort_unstable();
        if 2 * l.iter().sum::<u32>() + l.len() as u32 > 2 * g + 1 {
            return Ok(());
        }
        match principal_part(g, k, &l) {
            Err(TrrError::ZeroD { .. }) => prop_assert!(d_value(g, k, &l).unwrap().is_zero()),
            Err(e) => prop_assert!(false, "{}", e),
            Ok(r) => {
                let mut t = vec![k];
                t.extend(&l);
                prop_assert!(r.principal.coefficient(&t).is_one());
                for m in r.principal.terms().keys() {
                    prop_assert_eq!(m.iter().sum::<u32>(), g);
                    prop_assert!(m == &t || m[0] > k, "{:?}", m);
                }
            }
        }
    }
}

#[test]
fn genus_one_relation() {
    let r = assemble_full_trr(1, 1, &[], &ScaleGuard::default()).unwrap();
    assert!(r.principal.coefficient(&[1]).is_one());
    let lp = StableGraph::new(vec![0], vec![0], vec![(0, 0)]).unwrap();
    let expected = StrataElement::from_term(DecoratedGraph::plain(&lp), Rational::new(-1, 24));
    assert_eq!(r.boundary.unwrap(), expected);
}

#[test]
fn invalid_targets_are_rejected() {
    let r = assemble_full_trr(1, 0, &[1], &ScaleGuard::default());
    assert!(matches!(r, Err(TrrError::Precondition(_))));
    assert!(matches!(principal_part(2, 2, &[1]), Err(TrrError::InconsistentK { .. })));
    assert!(matches!(assemble_full_trr(3, 3, &[], &ScaleGuard::default()), Err(TrrError::ScaleGuard { .. })));
}

#[test]
fn closed_and_brute_routes_agree_in_genus_one() {
    let closed = principal_part(1, 1, &[]).unwrap();
    let brute = assemble_full_trr(1, 1, &[], &ScaleGuard::default()).unwrap();
    assert_eq!(closed.principal, brute.principal);
    assert_eq!(closed.provenance, brute.provenance);
}

#[test]
fn pixton_class_is_even_polynomial_in_a() {
    let values: Vec<StrataElement> =
        (0..6i64).map(|t| pixton_constant_term(1, 2, &AVector::new(vec![t, -t]).unwrap(), 1).unwrap()).collect();
    let keys: std::collections::BTreeSet<_> = values.iter().flat_map(|x| x.terms().keys().cloned()).collect();
    for key in keys {
        let nodes: Vec<_> = values.iter().enumerate().map(|(t, x)| (Rational::from(t as i64), x.coefficient(&key))).collect();
        let c = interpolate_coeffs(&nodes).unwrap();
        assert!(c.len() <= 3, "degree above 2 in a: {c:?}");
        assert!(c.get(1).is_none_or(Rational::is_zero), "odd part in a: {c:?}");
    }
}

#[test]
fn scan_filter_is_a_restriction() {
    let all = scan_zeros_filtered(1, 9, None);
    let four = scan_zeros_filtered(1, 9, Some(4));
    let three = scan_zeros_filtered(1, 9, Some(3));
    assert_eq!(all.zeros, four.zeros);
    assert!(three.zeros.is_empty());
    assert!(three.cells_checked < all.cells_checked);
}
