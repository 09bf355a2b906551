//! Deterministic sample-tree generation for test sweeps.  Not part of
//! the public contract.

use crate::knot::{Catalog, KglDatum, KnotTree};
use crate::oracle::SplitMix64;
use crate::symmetry::invert_class;
use crate::symmetry::signed_perm::SignedPerm;

const TORUS_POOL: &[(i64, i64)] = &[(2, 3), (2, 5), (3, 4), (2, 7), (3, 5), (2, -3)];
const HYP_NAMES: &[&str] = &["ka", "kb", "kc"];
const KGL_POOL: &[&str] = &[
    "borromean",
    "whitehead",
    "link6_3_2",
    "stoimenow2",
    "stoimenow3",
    "sakuma3",
];

fn custom_kgl(rng: &mut SplitMix64) -> KglDatum {
    match rng.below(3) {
        0 => KglDatum {
            name: "custom_swap".into(),
            n: 2,
            b_order: 2,
            rho_gen: SignedPerm::parse_cycles(2, "(1 2)").unwrap(),
            inversion: Some(SignedPerm::parse_cycles(2, "(1 2)").unwrap()),
        },
        1 => KglDatum {
            name: "custom_triv".into(),
            n: 1,
            b_order: 3,
            rho_gen: SignedPerm::identity(1),
            inversion: None,
        },
        _ => KglDatum {
            name: "custom_negswap".into(),
            n: 2,
            b_order: 2,
            rho_gen: SignedPerm::parse_cycles(2, "(1 -)(2 -)(1 2)").unwrap(),
            inversion: Some(SignedPerm::parse_cycles(2, "(1 -)(2 -)").unwrap()),
        },
    }
}

fn leaf(rng: &mut SplitMix64) -> KnotTree {
    if rng.below(2) == 0 {
        let (p, q) = TORUS_POOL[rng.below(TORUS_POOL.len() as u64) as usize];
        KnotTree::torus(p, q)
    } else {
        let name = HYP_NAMES[rng.below(HYP_NAMES.len() as u64) as usize];
        let invertible = rng.below(2) == 0;
        KnotTree::hyp(name, invertible)
    }
}

/// A valid, normalized tree of depth at most `depth`.
pub fn random_tree(rng: &mut SplitMix64, depth: usize) -> KnotTree {
    if depth == 0 {
        return leaf(rng);
    }
    match rng.below(10) {
        0 | 1 => leaf(rng),
        2 | 3 => {
            let (p, q) = TORUS_POOL[rng.below(5) as usize];
            KnotTree::cable(p.abs(), q.abs(), random_tree(rng, depth - 1))
        }
        4 | 5 | 6 => {
            let count = 2 + rng.below(3) as usize;
            let mut summands = Vec::with_capacity(count);
            for _ in 0..count {
                let s = non_sum_tree(rng, depth - 1);
                // duplicates and inverse pairs exercise the Young quotient
                match rng.below(4) {
                    0 if summands.len() + 2 <= count + 1 => {
                        summands.push(s.clone());
                        summands.push(s);
                    }
                    1 => {
                        summands.push(invert_class(&s));
                    }
                    _ => summands.push(s),
                }
            }
            while summands.len() < 2 {
                summands.push(non_sum_tree(rng, depth - 1));
            }
            KnotTree::sum(summands)
        }
        7 | 8 => {
            let kgl = if rng.below(5) == 0 {
                custom_kgl(rng)
            } else {
                Catalog::get_kgl(KGL_POOL[rng.below(KGL_POOL.len() as u64) as usize]).unwrap()
            };
            let children = (0..kgl.n).map(|_| random_tree(rng, depth - 1)).collect();
            KnotTree::splice(kgl, children)
        }
        _ => invert_class(&random_tree(rng, depth - 1)),
    }
}

fn non_sum_tree(rng: &mut SplitMix64, depth: usize) -> KnotTree {
    for _ in 0..16 {
        let t = random_tree(rng, depth);
        if !matches!(t, KnotTree::Sum { .. }) && !t.is_unknot() {
            return t;
        }
    }
    leaf(rng)
}

/// `count` deterministic sample trees.
pub fn random_trees(seed: u64, count: usize, depth: usize) -> Vec<KnotTree> {
    let mut rng = SplitMix64::new(seed);
    (0..count).map(|_| random_tree(&mut rng, depth)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::validate;

    #[test]
    fn generated_trees_are_valid_and_deterministic() {
        let a = random_trees(42, 60, 4);
        let b = random_trees(42, 60, 4);
        assert_eq!(a, b);
        for t in &a {
            assert!(validate(t).is_valid(), "invalid generated tree: {:?}", t);
        }
        assert!(a.iter().any(|t| matches!(t, KnotTree::Sum { .. })));
        assert!(a.iter().any(|t| matches!(t, KnotTree::HypSplice { .. })));
    }
}
