//! The inversion action on knot classes, invertibility decisions, the
//! twisting group A_f, and canonical forms / class equality.

pub mod signed_perm;

use std::collections::BTreeMap;

use crate::error::GroupError;
use crate::knot::{validate, KglDatum, KnotTree, Orientation};
use signed_perm::{Sign, SignedPerm};

/// The subgroup of a cyclic `B_L` generated by `gen^power`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicSubgroup {
    pub of: KglDatum,
    /// Index of the subgroup, i.e. the generator power.  Divides `b_order`.
    pub power: u64,
}

impl CyclicSubgroup {
    pub fn order(&self) -> u64 {
        self.of.b_order / self.power
    }

    /// Image of the subgroup generator under ρ.
    pub fn generator_image(&self) -> SignedPerm {
        self.of.rho_gen.pow(self.power)
    }
}

/// The companionship tree of the inverse knot `I·f`.
///
/// Hyperbolic leaves flip their orientation bit (no flip when invertible);
/// splice vertices with an inversion datum re-index their children by it,
/// inverting where the datum carries a minus sign; splice vertices without
/// one toggle the formal inverse marker.
pub fn invert_class(tree: &KnotTree) -> KnotTree {
    match tree {
        KnotTree::Unknot => KnotTree::Unknot,
        KnotTree::Torus { p, q } => KnotTree::torus(*p, *q),
        KnotTree::HypKnot {
            name, invertible, orientation,
        } => KnotTree::HypKnot {
            name: name.clone(),
            invertible: *invertible,
            orientation: if *invertible {
                *orientation
            } else {
                orientation.flip()
            },
        },
        KnotTree::Cable { p, q, companion } => KnotTree::cable(*p, *q, invert_class(companion)),
        KnotTree::Sum { summands } => KnotTree::Sum {
            summands: summands.iter().map(invert_class).collect(),
        },
        KnotTree::HypSplice {
            kgl, children, inverse_marker,
        } => match &kgl.inversion {
            Some(iota) => KnotTree::HypSplice {
                kgl: kgl.clone(),
                children: iota.act_on(children, invert_class),
                inverse_marker: *inverse_marker,
            },
            None => KnotTree::HypSplice {
                kgl: kgl.clone(),
                children: children.clone(),
                inverse_marker: !inverse_marker,
            },
        },
    }
}

/// Decides invertibility of the class by the structural criteria, one per
/// vertex kind.  Splice vertices test the inversion datum modulo the
/// declared symmetries: `ι` may be corrected by any element of the image
/// of ρ, since any two inversion isotopies differ by a symmetry of the
/// link.
pub fn is_invertible(tree: &KnotTree) -> bool {
    match tree {
        KnotTree::Unknot | KnotTree::Torus { .. } => true,
        KnotTree::HypKnot { invertible, .. } => *invertible,
        KnotTree::Cable { companion, .. } => is_invertible(companion),
        KnotTree::Sum { summands } => {
            let mut mult: BTreeMap<KnotTree, i64> = BTreeMap::new();
            for s in summands {
                *mult.entry(canonical_form(s)).or_default() += 1;
            }
            mult.iter().all(|(class, count)| {
                let inv = canonical_form(&invert_class(class));
                mult.get(&inv) == Some(count)
            })
        }
        KnotTree::HypSplice {
            kgl, children, inverse_marker,
        } => {
            if *inverse_marker {
                return false;
            }
            let Some(iota) = &kgl.inversion else {
                return false;
            };
            let canon: Vec<KnotTree> = children.iter().map(canonical_form).collect();
            let image = iota.act_on(&canon, invert_class);
            let image: Vec<KnotTree> = image.iter().map(canonical_form).collect();
            rho_orbit(kgl, &image).into_iter().any(|t| t == canon)
        }
    }
}

/// Largest subgroup of `B_L` whose action through ρ fixes the tuple of
/// companion classes slot-wise.  The preserving elements form a subgroup
/// of the cyclic group, so it suffices to find the least divisor `d` of
/// `b_order` with `gen^d` preserving.
pub fn compute_af(kgl: &KglDatum, children: &[KnotTree]) -> Result<CyclicSubgroup, GroupError> {
    if children.len() != kgl.n {
        return Err(GroupError::SizeMismatch {
            expected: kgl.n,
            got: children.len(),
        });
    }
    let canon: Vec<KnotTree> = children.iter().map(canonical_form).collect();
    let mut divisors: Vec<u64> = (1..=kgl.b_order).filter(|d| kgl.b_order % d == 0).collect();
    divisors.sort_unstable();
    for d in divisors {
        let g = kgl.rho_gen.pow(d);
        let image = g.act_on(&canon, invert_class);
        let preserved = image
            .iter()
            .zip(&canon)
            .all(|(img, orig)| canonical_form(img) == *orig);
        if preserved {
            return Ok(CyclicSubgroup {
                of: kgl.clone(),
                power: d,
            });
        }
    }
    unreachable!("gen^b_order is the identity and always preserves");
}

fn rho_orbit(kgl: &KglDatum, tuple: &[KnotTree]) -> Vec<Vec<KnotTree>> {
    let ord = kgl.rho_gen.order();
    let mut out = Vec::with_capacity(ord as usize);
    for j in 0..ord {
        let g = kgl.rho_gen.pow(j);
        let t = g.act_on(tuple, invert_class);
        out.push(t.into_iter().map(|c| canonical_form(&c)).collect());
    }
    out
}

/// Deterministic normal form for class comparison: torus parameters are
/// normalized, sum children sorted, and splice children replaced by the
/// lexicographically least tuple in their orbit under the image of
/// `ρ(B_L)`.
pub fn canonical_form(tree: &KnotTree) -> KnotTree {
    match tree {
        KnotTree::Unknot => KnotTree::Unknot,
        KnotTree::Torus { p, q } => {
            let (mut p, mut q) = (*p, *q);
            if p.abs() > q.abs() {
                std::mem::swap(&mut p, &mut q);
            }
            // T(-p,-q) is the inverse class, and torus knots are invertible
            if p < 0 {
                p = -p;
                q = -q;
            }
            KnotTree::torus(p, q)
        }
        KnotTree::HypKnot {
            name, invertible, orientation,
        } => KnotTree::HypKnot {
            name: name.clone(),
            invertible: *invertible,
            orientation: if *invertible {
                Orientation::Plus
            } else {
                *orientation
            },
        },
        KnotTree::Cable { p, q, companion } => {
            KnotTree::cable(*p, *q, canonical_form(companion))
        }
        KnotTree::Sum { summands } => {
            let mut canon: Vec<KnotTree> = summands.iter().map(canonical_form).collect();
            canon.sort();
            KnotTree::Sum { summands: canon }
        }
        KnotTree::HypSplice {
            kgl, children, inverse_marker,
        } => {
            let canon: Vec<KnotTree> = children.iter().map(canonical_form).collect();
            let children = rho_orbit(kgl, &canon)
                .into_iter()
                .min()
                .unwrap_or(canon);
            KnotTree::HypSplice {
                kgl: kgl.clone(),
                children,
                inverse_marker: *inverse_marker,
            }
        }
    }
}

/// Like `canonical_form` on a splice vertex, additionally returning the
/// power `j` of the orbit element `ρ(gen)^j` that realizes the
/// lexicographically least child tuple.
pub(crate) fn canonical_splice_witness(kgl: &KglDatum, children: &[KnotTree]) -> (Vec<KnotTree>, u64) {
    let canon: Vec<KnotTree> = children.iter().map(canonical_form).collect();
    let orbit = rho_orbit(kgl, &canon);
    let (j, best) = orbit
        .into_iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.cmp(b))
        .expect("orbit contains the identity image");
    (best, j as u64)
}

/// Class equality: equality of canonical forms.  Expects valid trees
/// (call `normalize` first if flattening may be needed).
pub fn classes_equal(a: &KnotTree, b: &KnotTree) -> bool {
    debug_assert!(validate(a).is_valid(), "classes_equal expects valid trees");
    debug_assert!(validate(b).is_valid(), "classes_equal expects valid trees");
    canonical_form(a) == canonical_form(b)
}

/// The signed permutation describing how a monodromy element moves and
/// inverts companion slots: slot `i` moves to `target(i)`, inverted when
/// the sign there is minus.
pub fn per_slot_inverted(sp: &SignedPerm) -> Vec<bool> {
    (0..sp.n())
        .map(|i| sp.sign_from_source(i) == Sign::Minus)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::Catalog;

    fn fig8() -> KnotTree {
        KnotTree::hyp("fig8", true)
    }

    fn trefoil() -> KnotTree {
        KnotTree::torus(2, 3)
    }

    fn noninv() -> KnotTree {
        KnotTree::hyp("k", false)
    }

    fn borromean(children: Vec<KnotTree>) -> KnotTree {
        KnotTree::splice(Catalog::get_kgl("borromean").unwrap(), children)
    }

    #[test]
    fn signed_two_cycle_has_order_4() {
        let sp = SignedPerm::parse_cycles(2, "(1 2 -)").unwrap();
        assert_eq!(sp.order(), 4);
        let e = SignedPerm::identity(2);
        assert_eq!(e.compose(&sp).unwrap(), sp);
        assert_eq!(sp.compose(&e).unwrap(), sp);
    }

    #[test]
    fn signed_three_cycle_has_order_6() {
        // brute-force check alongside the cycle-structure formula
        let sp = SignedPerm::parse_cycles(3, "(1 2 3 -)").unwrap();
        assert_eq!(sp.order(), 6);
        let mut acc = SignedPerm::identity(3);
        let mut brute = 0;
        for k in 1..=12 {
            acc = sp.compose(&acc).unwrap();
            if acc.is_identity() {
                brute = k;
                break;
            }
        }
        assert_eq!(brute, 6);
    }

    #[test]
    fn torus_is_self_inverse() {
        assert_eq!(invert_class(&trefoil()), trefoil());
        assert!(is_invertible(&trefoil()));
    }

    #[test]
    fn noninvertible_leaf_flips_bit() {
        let t = noninv();
        let it = invert_class(&t);
        assert_eq!(
            it,
            KnotTree::HypKnot {
                name: "k".into(),
                invertible: false,
                orientation: Orientation::Minus
            }
        );
        assert!(!classes_equal(&t, &it));
        assert!(classes_equal(&invert_class(&it), &t), "involution");
    }

    #[test]
    fn sum_inverts_summand_wise() {
        let s = KnotTree::sum(vec![trefoil(), noninv()]);
        assert_eq!(
            invert_class(&s),
            KnotTree::sum(vec![invert_class(&trefoil()), invert_class(&noninv())])
        );
    }

    #[test]
    fn cable_of_noninvertible_is_noninvertible() {
        let c = KnotTree::cable(2, 7, noninv());
        assert!(!is_invertible(&c));
        assert!(is_invertible(&KnotTree::cable(2, 7, fig8())));
    }

    #[test]
    fn sum_with_inverse_pair_is_invertible() {
        let t = noninv();
        let s = KnotTree::sum(vec![t.clone(), invert_class(&t)]);
        assert!(is_invertible(&s));
        let asym = KnotTree::sum(vec![t.clone(), t.clone()]);
        assert!(!is_invertible(&asym));
    }

    #[test]
    fn whitehead_double_is_invertible_through_the_link_symmetry() {
        // the recorded iota = (1 -) composes with rho(gen) = (1 -) to the
        // identity datum, so the double inverts whatever the child does;
        // this matches class equality under the signed orbit
        let w = Catalog::get_kgl("whitehead").unwrap();
        let inv = KnotTree::splice(w.clone(), vec![fig8()]);
        assert!(is_invertible(&inv));
        let not = KnotTree::splice(w, vec![noninv()]);
        assert!(is_invertible(&not));
        assert!(classes_equal(&not, &invert_class(&not)));
    }

    #[test]
    fn trivial_rho_ties_invertibility_to_the_child() {
        // link 6_3_2 has trivial rho, so no symmetry corrects iota = (1 -)
        let l = Catalog::get_kgl("link6_3_2").unwrap();
        let inv = KnotTree::splice(l.clone(), vec![fig8()]);
        assert!(is_invertible(&inv));
        let not = KnotTree::splice(l, vec![noninv()]);
        assert!(!is_invertible(&not));
        assert!(!classes_equal(&not, &invert_class(&not)));
    }

    #[test]
    fn af_orders_for_the_borromean_examples() {
        let kgl = Catalog::get_kgl("borromean").unwrap();
        let af = compute_af(&kgl, &[fig8(), fig8()]).unwrap();
        assert_eq!(af.order(), 4, "two figure-8s keep all of B_L");

        let af = compute_af(&kgl, &[trefoil(), fig8()]).unwrap();
        assert_eq!(af.order(), 2, "mixed children drop to Z_2");

        let w = Catalog::get_kgl("whitehead").unwrap();
        let af = compute_af(&w, &[noninv()]).unwrap();
        assert_eq!(af.order(), 1, "non-invertible child trivializes A_f");
    }

    #[test]
    fn af_is_a_subgroup_bound() {
        let kgl = Catalog::get_kgl("borromean").unwrap();
        let af = compute_af(&kgl, &[trefoil(), fig8()]).unwrap();
        assert_eq!(kgl.b_order % af.power, 0);
        // the generator of the next-larger subgroup does not preserve
        let bigger = af.power / 2;
        assert!(bigger >= 1);
        let g = kgl.rho_gen.pow(bigger);
        let canon: Vec<_> = [trefoil(), fig8()].iter().map(canonical_form).collect();
        let image: Vec<_> = g
            .act_on(&canon, invert_class)
            .iter()
            .map(canonical_form)
            .collect();
        assert_ne!(image, canon);
    }

    #[test]
    fn sum_order_is_quotiented() {
        let a = trefoil();
        let b = fig8();
        let s1 = KnotTree::sum(vec![a.clone(), b.clone()]);
        let s2 = KnotTree::sum(vec![b, a]);
        assert!(classes_equal(&s1, &s2));
    }

    #[test]
    fn splice_orbit_relabeling() {
        let s1 = borromean(vec![fig8(), trefoil()]);
        let s2 = borromean(vec![trefoil(), fig8()]);
        assert!(classes_equal(&s1, &s2), "rho carries one labeling to the other");
    }

    #[test]
    fn torus_parameter_symmetry() {
        assert!(classes_equal(&KnotTree::torus(2, 3), &KnotTree::torus(3, 2)));
        assert!(classes_equal(
            &KnotTree::torus(-2, -3),
            &KnotTree::torus(2, 3)
        ));
        assert!(!classes_equal(
            &KnotTree::torus(2, -3),
            &KnotTree::torus(2, 3)
        ));
        assert!(classes_equal(
            &KnotTree::torus(-2, 3),
            &KnotTree::torus(2, -3)
        ));
    }

    #[test]
    fn formal_inverse_marker_cancels() {
        let s = KnotTree::splice(Catalog::get_kgl("stoimenow2").unwrap(), vec![fig8(), trefoil()]);
        let inv = invert_class(&s);
        assert!(!classes_equal(&s, &inv), "marked class is distinct");
        assert!(classes_equal(&invert_class(&inv), &s), "double marking cancels");
        assert!(!is_invertible(&s));
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let trees = [
            borromean(vec![fig8(), trefoil()]),
            KnotTree::sum(vec![fig8(), trefoil(), fig8()]),
            KnotTree::cable(3, 4, KnotTree::torus(5, 2)),
        ];
        for t in &trees {
            let c = canonical_form(t);
            assert_eq!(canonical_form(&c), c);
        }
    }

    #[test]
    fn invertibility_matches_class_equality_on_examples() {
        let samples = [
            trefoil(),
            fig8(),
            noninv(),
            KnotTree::cable(2, 7, noninv()),
            KnotTree::sum(vec![noninv(), invert_class(&noninv())]),
            KnotTree::sum(vec![noninv(), noninv()]),
            borromean(vec![fig8(), fig8()]),
            borromean(vec![trefoil(), noninv()]),
            KnotTree::splice(Catalog::get_kgl("whitehead").unwrap(), vec![noninv()]),
            KnotTree::splice(Catalog::get_kgl("sakuma3").unwrap(), vec![fig8(), fig8(), trefoil()]),
        ];
        for t in &samples {
            assert_eq!(
                is_invertible(t),
                classes_equal(t, &invert_class(t)),
                "criteria disagree on {:?}",
                t
            );
        }
    }
}
