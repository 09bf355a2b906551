//! Property tests: group laws, involutions, idempotence, round-trips.

use proptest::prelude::*;

use kspace_core::io::dsl::{parse_knot, print_knot};
use kspace_core::knot::{normalize, validate, KnotTree};
use kspace_core::oracle::SplitMix64;
use kspace_core::symmetry::signed_perm::{Sign, SignedPerm};
use kspace_core::symmetry::{canonical_form, classes_equal, invert_class, is_invertible};
use kspace_core::testgen::random_tree;
use kspace_core::{dimension, homotopy_type, simplify};

fn arb_signed_perm(n: usize) -> impl Strategy<Value = SignedPerm> {
    (any::<u64>(), any::<u64>()).prop_map(move |(seed_p, seed_s)| {
        let mut rng = SplitMix64::new(seed_p);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = rng.below(i as u64 + 1) as usize;
            perm.swap(i, j);
        }
        let mut rng = SplitMix64::new(seed_s);
        let signs: Vec<Sign> = (0..n)
            .map(|_| if rng.below(2) == 0 { Sign::Plus } else { Sign::Minus })
            .collect();
        SignedPerm::new(perm, signs).unwrap()
    })
}

fn arb_tree(max_depth: usize) -> impl Strategy<Value = KnotTree> {
    any::<u64>().prop_map(move |seed| {
        let mut rng = SplitMix64::new(seed);
        random_tree(&mut rng, max_depth)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn signed_perm_group_laws(a in arb_signed_perm(4), b in arb_signed_perm(4), c in arb_signed_perm(4)) {
        let e = SignedPerm::identity(4);
        prop_assert_eq!(a.compose(&e).unwrap(), a.clone());
        prop_assert_eq!(e.compose(&a).unwrap(), a.clone());
        prop_assert!(a.compose(&a.inverse()).unwrap().is_identity());
        prop_assert!(a.inverse().compose(&a).unwrap().is_identity());
        let ab_c = a.compose(&b).unwrap().compose(&c).unwrap();
        let a_bc = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
    }

    #[test]
    fn signed_perm_matches_its_matrix(a in arb_signed_perm(4), b in arb_signed_perm(4)) {
        let prod = a.compose(&b).unwrap();
        prop_assert_eq!(prod.matrix(), a.matrix().mul(&b.matrix()));
        prop_assert!(a.matrix().mul(&a.inverse().matrix()).is_identity());
    }

    #[test]
    fn signed_perm_order_is_least(a in arb_signed_perm(4)) {
        let ord = a.order();
        prop_assert!(a.pow(ord).is_identity());
        for t in 1..ord {
            prop_assert!(!a.pow(t).is_identity(), "order must be minimal");
        }
    }

    #[test]
    fn single_signed_cycle_order_bound(len in 1_usize..=5, minus in any::<bool>()) {
        // single signed cycles have order at most 2n
        let n = len;
        let body: Vec<String> = (1..=len).map(|i| i.to_string()).collect();
        let text = format!("({}{})", body.join(" "), if minus { " -" } else { "" });
        let sp = SignedPerm::parse_cycles(n, &text).unwrap();
        prop_assert!(sp.order() <= 2 * n as u64);
    }

    #[test]
    fn cycle_notation_round_trips(a in arb_signed_perm(5)) {
        let text = a.cycle_string();
        let back = SignedPerm::parse_cycles(5, &text).unwrap();
        prop_assert_eq!(back, a, "notation `{}`", text);
    }

    #[test]
    fn inversion_is_an_involution_on_classes(t in arb_tree(4)) {
        let t = normalize(&t).unwrap();
        let twice = invert_class(&invert_class(&t));
        prop_assert!(classes_equal(&twice, &t));
    }

    #[test]
    fn invertibility_agrees_with_class_equality(t in arb_tree(4)) {
        let t = normalize(&t).unwrap();
        prop_assert_eq!(is_invertible(&t), classes_equal(&t, &invert_class(&t)));
    }

    #[test]
    fn canonical_form_is_idempotent_and_class_stable(t in arb_tree(3)) {
        let t = normalize(&t).unwrap();
        let c = canonical_form(&t);
        prop_assert_eq!(canonical_form(&c), c.clone());
        prop_assert!(classes_equal(&t, &c));
    }

    #[test]
    fn normalize_is_idempotent(t in arb_tree(4)) {
        let once = normalize(&t).unwrap();
        prop_assert_eq!(normalize(&once).unwrap(), once.clone());
        prop_assert!(validate(&once).is_valid());
    }

    #[test]
    fn simplify_is_idempotent_and_keeps_dimension(t in arb_tree(3)) {
        let t = normalize(&t).unwrap();
        let e = homotopy_type(&t).unwrap();
        let s = simplify(&e);
        prop_assert_eq!(simplify(&s), s.clone());
        prop_assert_eq!(dimension(&s), dimension(&simplify(&s)));
    }

    #[test]
    fn inverse_knots_have_the_same_homotopy_type(t in arb_tree(3)) {
        let t = normalize(&t).unwrap();
        let a = simplify(&homotopy_type(&t).unwrap());
        let b = simplify(&homotopy_type(&invert_class(&t)).unwrap());
        prop_assert!(a.eq_ignoring_tags(&b));
    }

    #[test]
    fn dimension_is_undefined_exactly_on_sums(t in arb_tree(3)) {
        let t = normalize(&t).unwrap();
        fn has_sum(t: &KnotTree) -> bool {
            match t {
                KnotTree::Sum { .. } => true,
                KnotTree::Cable { companion, .. } => has_sum(companion),
                KnotTree::HypSplice { children, .. } => children.iter().any(has_sum),
                _ => false,
            }
        }
        let d = dimension(&simplify(&homotopy_type(&t).unwrap()));
        prop_assert_eq!(d.is_none(), has_sum(&t));
    }

    #[test]
    fn parse_print_identity(t in arb_tree(4)) {
        let printed = print_knot(&t);
        let back = parse_knot(&printed).unwrap();
        prop_assert_eq!(back, t, "printed `{}`", printed);
    }

    #[test]
    fn classes_equal_is_an_equivalence(a in arb_tree(2), b in arb_tree(2), c in arb_tree(2)) {
        let a = normalize(&a).unwrap();
        let b = normalize(&b).unwrap();
        let c = normalize(&c).unwrap();
        prop_assert!(classes_equal(&a, &a));
        prop_assert_eq!(classes_equal(&a, &b), classes_equal(&b, &a));
        if classes_equal(&a, &b) && classes_equal(&b, &c) {
            prop_assert!(classes_equal(&a, &c));
        }
    }
}

#[test]
fn iterated_cable_tower_is_a_torus() {
    // (S^1)^n for towers of height up to 5
    let pairs = [(2, 3), (2, 5), (3, 4), (2, 7), (3, 5)];
    let mut tower = KnotTree::torus(2, 3);
    for n in 1..=5usize {
        let e = simplify(&homotopy_type(&tower).unwrap());
        let circles = match &e {
            kspace_core::HomotopyExpr::Circle { .. } => 1,
            kspace_core::HomotopyExpr::Product { factors } => {
                assert!(factors
                    .iter()
                    .all(|f| matches!(f, kspace_core::HomotopyExpr::Circle { .. })));
                factors.len()
            }
            other => panic!("expected circles, got {:?}", other),
        };
        assert_eq!(circles, n);
        assert_eq!(dimension(&e), Some(n as u64));
        let (p, q) = pairs[n % pairs.len()];
        tower = KnotTree::cable(p, q, tower);
    }
}
