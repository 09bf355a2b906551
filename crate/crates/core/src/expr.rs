//! The term algebra of homotopy types and the evaluation of the
//! classification recursion.
//!
//! `HomotopyExpr` values describe K(π,1) spaces built from circles:
//! products, unordered configuration spaces modulo a Young subgroup, and
//! twisted products `(∏ fibers) ×_{ℤ_m} S¹` where `ℤ_m` rotates the base
//! circle freely and acts on the fiber through a signed permutation of
//! the factors.

use serde::{Deserialize, Serialize};

use crate::error::KnotError;
use crate::knot::{validate, KnotTree};
use crate::symmetry::signed_perm::SignedPerm;
use crate::symmetry::{classes_equal, compute_af, per_slot_inverted};

/// Role tags on circle factors.  Equality of expressions ignores tags
/// only where tests ask for it explicitly; the tags are metadata for the
/// Gramain machinery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircleTag {
    Meridian,
    Cabling,
    BaseL0,
    Plain,
}

/// A set partition of `{0..n}` with canonical block order (blocks sorted
/// by least element, elements ascending).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SetPartition {
    pub n: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> SetPartition {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        let part = SetPartition { n, blocks };
        debug_assert!(part.well_formed());
        part
    }

    pub fn singletons(n: usize) -> SetPartition {
        SetPartition::new(n, (0..n).map(|i| vec![i]).collect())
    }

    pub fn single_block(n: usize) -> SetPartition {
        SetPartition::new(n, vec![(0..n).collect()])
    }

    /// Groups indices by an equivalence on items.
    pub fn from_equivalence<T>(items: &[T], eq: impl Fn(&T, &T) -> bool) -> SetPartition {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for i in 0..items.len() {
            match blocks.iter_mut().find(|b| eq(&items[b[0]], &items[i])) {
                Some(b) => b.push(i),
                None => blocks.push(vec![i]),
            }
        }
        SetPartition::new(items.len(), blocks)
    }

    pub fn well_formed(&self) -> bool {
        let mut seen = vec![false; self.n];
        for b in &self.blocks {
            for &i in b {
                if i >= self.n || seen[i] {
                    return false;
                }
                seen[i] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Block index of element `i`.
    pub fn block_of(&self, i: usize) -> usize {
        self.blocks.iter().position(|b| b.contains(&i)).unwrap()
    }

    /// Order of the Young subgroup ∏ Σ_{|b|}.
    pub fn young_order(&self) -> u64 {
        self.blocks.iter().map(|b| factorial(b.len() as u64)).product()
    }

    /// Index of the Young subgroup in Σₙ.
    pub fn young_index(&self) -> u64 {
        factorial(self.n as u64) / self.young_order()
    }

    /// Image partition under a relabeling of `{0..n}`.
    pub fn relabel(&self, perm: &[usize]) -> SetPartition {
        SetPartition::new(
            self.n,
            self.blocks
                .iter()
                .map(|b| b.iter().map(|&i| perm[i]).collect())
                .collect(),
        )
    }

    /// Renders block sizes as a Young-subgroup label, e.g. `S2xS1`.
    pub fn young_label(&self) -> String {
        if self.blocks.len() == 1 {
            return format!("S{}", self.n);
        }
        let mut sizes: Vec<usize> = self.blocks.iter().map(|b| b.len()).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
            .iter()
            .map(|s| format!("S{}", s))
            .collect::<Vec<_>>()
            .join("x")
    }
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// Monodromy of a twisted product: how the generator of the twisting
/// group permutes and inverts the fiber factors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MonodromyDatum {
    pub sp: SignedPerm,
    pub per_slot_inverted: Vec<bool>,
}

impl MonodromyDatum {
    pub fn from_signed_perm(sp: SignedPerm) -> MonodromyDatum {
        let inv = per_slot_inverted(&sp);
        MonodromyDatum {
            sp,
            per_slot_inverted: inv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum HomotopyExpr {
    Point,
    Circle {
        tag: CircleTag,
    },
    Product {
        factors: Vec<HomotopyExpr>,
    },
    Config2ModYoung {
        n: usize,
        young: SetPartition,
        factors: Vec<HomotopyExpr>,
    },
    TwistedProduct {
        /// Order m of the twisting group ℤ_m.
        order: u64,
        monodromy: MonodromyDatum,
        fibers: Vec<HomotopyExpr>,
    },
}

impl HomotopyExpr {
    pub fn circle(tag: CircleTag) -> HomotopyExpr {
        HomotopyExpr::Circle { tag }
    }

    pub fn product(factors: Vec<HomotopyExpr>) -> HomotopyExpr {
        HomotopyExpr::Product { factors }
    }

    /// Structural equality that disregards circle role tags.
    pub fn eq_ignoring_tags(&self, other: &HomotopyExpr) -> bool {
        use HomotopyExpr::*;
        match (self, other) {
            (Point, Point) => true,
            (Circle { .. }, Circle { .. }) => true,
            (Product { factors: a }, Product { factors: b }) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.eq_ignoring_tags(y))
            }
            (
                Config2ModYoung { n: n1, young: y1, factors: a },
                Config2ModYoung { n: n2, young: y2, factors: b },
            ) => {
                n1 == n2
                    && y1 == y2
                    && a.iter().zip(b).all(|(x, y)| x.eq_ignoring_tags(y))
            }
            (
                TwistedProduct { order: m1, monodromy: d1, fibers: a },
                TwistedProduct { order: m2, monodromy: d2, fibers: b },
            ) => {
                m1 == m2
                    && d1 == d2
                    && a.len() == b.len()
                    && a.iter().zip(b).all(|(x, y)| x.eq_ignoring_tags(y))
            }
            _ => false,
        }
    }
}

/// Evaluates the classification recursion on a valid, normalized tree.
pub fn homotopy_type(tree: &KnotTree) -> Result<HomotopyExpr, KnotError> {
    let report = validate(tree);
    if !report.is_valid() {
        return Err(KnotError::InvalidTree(report));
    }
    Ok(expr_of(tree))
}

fn expr_of(tree: &KnotTree) -> HomotopyExpr {
    match tree {
        KnotTree::Unknot => HomotopyExpr::Point,
        KnotTree::Torus { .. } => HomotopyExpr::circle(CircleTag::Cabling),
        KnotTree::HypKnot { .. } => HomotopyExpr::product(vec![
            HomotopyExpr::circle(CircleTag::Meridian),
            HomotopyExpr::circle(CircleTag::BaseL0),
        ]),
        KnotTree::Cable { companion, .. } => HomotopyExpr::product(vec![
            HomotopyExpr::circle(CircleTag::Cabling),
            expr_of(companion),
        ]),
        KnotTree::Sum { summands } => {
            let young = SetPartition::from_equivalence(summands, classes_equal);
            // one expression per class, reused across the block, so that
            // equal classes yield equal factors
            let mut factors: Vec<Option<HomotopyExpr>> = vec![None; summands.len()];
            for block in &young.blocks {
                let rep = expr_of(&summands[block[0]]);
                for &i in block {
                    factors[i] = Some(rep.clone());
                }
            }
            HomotopyExpr::Config2ModYoung {
                n: summands.len(),
                young,
                factors: factors.into_iter().map(Option::unwrap).collect(),
            }
        }
        KnotTree::HypSplice { kgl, children, .. } => {
            let af = compute_af(kgl, children).expect("validated arity");
            let monodromy = MonodromyDatum::from_signed_perm(af.generator_image());
            HomotopyExpr::product(vec![
                HomotopyExpr::circle(CircleTag::Meridian),
                HomotopyExpr::TwistedProduct {
                    order: af.order(),
                    monodromy,
                    fibers: children.iter().map(expr_of).collect(),
                },
            ])
        }
    }
}

/// Algebraic normal form: products flattened and unit-free, trivial
/// twists unwrapped, point-fibered twists collapsed to their base circle.
pub fn simplify(e: &HomotopyExpr) -> HomotopyExpr {
    match e {
        HomotopyExpr::Point | HomotopyExpr::Circle { .. } => e.clone(),
        HomotopyExpr::Product { factors } => {
            let mut flat = Vec::new();
            for f in factors {
                match simplify(f) {
                    HomotopyExpr::Point => {}
                    HomotopyExpr::Product { factors } => flat.extend(factors),
                    other => flat.push(other),
                }
            }
            match flat.len() {
                0 => HomotopyExpr::Point,
                1 => flat.pop().unwrap(),
                _ => HomotopyExpr::Product { factors: flat },
            }
        }
        HomotopyExpr::Config2ModYoung { n, young, factors } => HomotopyExpr::Config2ModYoung {
            n: *n,
            young: young.clone(),
            factors: factors.iter().map(simplify).collect(),
        },
        HomotopyExpr::TwistedProduct { order, monodromy, fibers } => {
            let fibers: Vec<HomotopyExpr> = fibers.iter().map(simplify).collect();
            if *order == 1 {
                let mut factors = fibers;
                factors.push(HomotopyExpr::circle(CircleTag::BaseL0));
                return simplify(&HomotopyExpr::Product { factors });
            }
            if fibers.iter().all(|f| *f == HomotopyExpr::Point) {
                // a free finite rotation quotient of a circle is a circle
                return HomotopyExpr::circle(CircleTag::BaseL0);
            }
            HomotopyExpr::TwistedProduct {
                order: *order,
                monodromy: monodromy.clone(),
                fibers,
            }
        }
    }
}

/// Dimension of the flat manifold an expression describes, or `None` on
/// configuration-space quotients.
pub fn dimension(e: &HomotopyExpr) -> Option<u64> {
    match e {
        HomotopyExpr::Point => Some(0),
        HomotopyExpr::Circle { .. } => Some(1),
        HomotopyExpr::Product { factors } => {
            factors.iter().map(dimension).sum::<Option<u64>>()
        }
        HomotopyExpr::Config2ModYoung { .. } => None,
        HomotopyExpr::TwistedProduct { fibers, .. } => {
            Some(1 + fibers.iter().map(dimension).sum::<Option<u64>>()?)
        }
    }
}

/// Deterministic text rendering, e.g.
/// `S^1 x ((S^1)^2 x (S^1)^2) x_{Z4} S^1`.
///
/// Runs of circle factors group into powers `(S^1)^k`; the quotient
/// operators `x_{Zm}` / `x_{G}` bind tighter than the plain product, so a
/// trailing quotient factor needs no parentheses.
pub fn render(e: &HomotopyExpr) -> String {
    render_expr(e).0
}

/// Renders to (text, atomic); atomic pieces are safe operands without
/// extra parentheses.
fn render_expr(e: &HomotopyExpr) -> (String, bool) {
    match e {
        HomotopyExpr::Point => ("*".into(), true),
        HomotopyExpr::Circle { .. } => ("S^1".into(), true),
        HomotopyExpr::Product { factors } => render_product(factors),
        HomotopyExpr::Config2ModYoung { n, young, factors } => {
            let op = render_wrapped(factors);
            (
                format!("C2({}) x_{{{}}} {}", n, young.young_label(), op),
                false,
            )
        }
        HomotopyExpr::TwistedProduct { order, fibers, .. } => {
            let op = render_wrapped(fibers);
            (format!("{} x_{{Z{}}} S^1", op, order), false)
        }
    }
}

fn render_wrapped(factors: &[HomotopyExpr]) -> String {
    let (body, atomic) = render_product(factors);
    if atomic {
        body
    } else {
        format!("({})", body)
    }
}

fn render_product(factors: &[HomotopyExpr]) -> (String, bool) {
    let mut parts: Vec<(String, bool)> = Vec::new();
    let mut circle_run = 0usize;
    let flush = |parts: &mut Vec<(String, bool)>, run: usize| {
        if run == 1 {
            parts.push(("S^1".into(), true));
        } else if run > 1 {
            parts.push((format!("(S^1)^{}", run), true));
        }
    };
    for f in factors {
        if matches!(f, HomotopyExpr::Circle { .. }) {
            circle_run += 1;
        } else {
            flush(&mut parts, circle_run);
            circle_run = 0;
            parts.push(render_expr(f));
        }
    }
    flush(&mut parts, circle_run);
    if parts.is_empty() {
        return ("*".into(), true);
    }
    if parts.len() == 1 {
        return parts.pop().unwrap();
    }
    let last = parts.len() - 1;
    let joined = parts
        .iter()
        .enumerate()
        .map(|(i, (text, atomic))| {
            if *atomic || i == last {
                text.clone()
            } else {
                format!("({})", text)
            }
        })
        .collect::<Vec<_>>()
        .join(" x ");
    (joined, false)
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

    fn borromean(children: Vec<KnotTree>) -> KnotTree {
        KnotTree::splice(Catalog::get_kgl("borromean").unwrap(), children)
    }

    fn torus_expr() -> HomotopyExpr {
        HomotopyExpr::circle(CircleTag::Cabling)
    }

    fn hyp_expr() -> HomotopyExpr {
        HomotopyExpr::product(vec![
            HomotopyExpr::circle(CircleTag::Meridian),
            HomotopyExpr::circle(CircleTag::BaseL0),
        ])
    }

    #[test]
    fn unknot_is_contractible() {
        assert_eq!(homotopy_type(&KnotTree::Unknot).unwrap(), HomotopyExpr::Point);
    }

    #[test]
    fn iterated_cable_is_a_torus_of_circles() {
        let f = KnotTree::cable(2, 5, trefoil());
        let e = simplify(&homotopy_type(&f).unwrap());
        assert_eq!(
            e,
            HomotopyExpr::product(vec![torus_expr(), torus_expr()]),
            "(S^1)^2 up to tags"
        );
        assert!(e.eq_ignoring_tags(&HomotopyExpr::product(vec![
            HomotopyExpr::circle(CircleTag::Plain),
            HomotopyExpr::circle(CircleTag::Plain),
        ])));
    }

    #[test]
    fn borromean_sum_of_two_figure8s() {
        let t = borromean(vec![fig8(), fig8()]);
        let e = simplify(&homotopy_type(&t).unwrap());
        let kgl = Catalog::get_kgl("borromean").unwrap();
        let expected = HomotopyExpr::product(vec![
            HomotopyExpr::circle(CircleTag::Meridian),
            HomotopyExpr::TwistedProduct {
                order: 4,
                monodromy: MonodromyDatum::from_signed_perm(kgl.rho_gen.clone()),
                fibers: vec![hyp_expr(), hyp_expr()],
            },
        ]);
        assert_eq!(e, expected);
        assert_eq!(dimension(&e), Some(6), "6-dimensional Euclidean manifold");
    }

    #[test]
    fn borromean_trefoil_fig8_variant() {
        let t = borromean(vec![trefoil(), fig8()]);
        let e = simplify(&homotopy_type(&t).unwrap());
        let kgl = Catalog::get_kgl("borromean").unwrap();
        let expected = HomotopyExpr::product(vec![
            HomotopyExpr::circle(CircleTag::Meridian),
            HomotopyExpr::TwistedProduct {
                order: 2,
                monodromy: MonodromyDatum::from_signed_perm(kgl.rho_gen.pow(2)),
                fibers: vec![torus_expr(), hyp_expr()],
            },
        ]);
        assert_eq!(e, expected);
        assert_eq!(dimension(&e), Some(5));
    }

    #[test]
    fn whitehead_doubles() {
        let w = Catalog::get_kgl("whitehead").unwrap();
        let invertible = KnotTree::splice(w.clone(), vec![fig8()]);
        let e = simplify(&homotopy_type(&invertible).unwrap());
        assert_eq!(
            e,
            HomotopyExpr::product(vec![
                HomotopyExpr::circle(CircleTag::Meridian),
                HomotopyExpr::TwistedProduct {
                    order: 2,
                    monodromy: MonodromyDatum::from_signed_perm(w.rho_gen.clone()),
                    fibers: vec![hyp_expr()],
                },
            ])
        );

        let noninv = KnotTree::splice(w, vec![KnotTree::hyp("k", false)]);
        let e = simplify(&homotopy_type(&noninv).unwrap());
        // A_f trivial: the twist unwraps into S^1 x S^1 x K_J
        assert_eq!(
            e,
            HomotopyExpr::product(vec![
                HomotopyExpr::circle(CircleTag::Meridian),
                HomotopyExpr::circle(CircleTag::Meridian),
                HomotopyExpr::circle(CircleTag::BaseL0),
                HomotopyExpr::circle(CircleTag::BaseL0),
            ])
        );
        assert_eq!(dimension(&e), Some(4));
    }

    #[test]
    fn sum_of_four_trefoils() {
        let t = KnotTree::sum(vec![trefoil(), trefoil(), trefoil(), trefoil()]);
        let e = simplify(&homotopy_type(&t).unwrap());
        assert_eq!(
            e,
            HomotopyExpr::Config2ModYoung {
                n: 4,
                young: SetPartition::single_block(4),
                factors: vec![torus_expr(); 4],
            }
        );
        assert_eq!(dimension(&e), None, "configuration quotients have no flat model");
        assert_eq!(render(&e), "C2(4) x_{S4} (S^1)^4");
    }

    #[test]
    fn simplify_laws() {
        let p = HomotopyExpr::product(vec![HomotopyExpr::Point, torus_expr()]);
        assert_eq!(simplify(&p), torus_expr());

        let tw = HomotopyExpr::TwistedProduct {
            order: 1,
            monodromy: MonodromyDatum::from_signed_perm(SignedPerm::identity(1)),
            fibers: vec![hyp_expr()],
        };
        assert_eq!(
            simplify(&tw),
            HomotopyExpr::product(vec![
                HomotopyExpr::circle(CircleTag::Meridian),
                HomotopyExpr::circle(CircleTag::BaseL0),
                HomotopyExpr::circle(CircleTag::BaseL0),
            ])
        );

        let rot = HomotopyExpr::TwistedProduct {
            order: 4,
            monodromy: MonodromyDatum::from_signed_perm(
                SignedPerm::parse_cycles(2, "(1 2 -)").unwrap(),
            ),
            fibers: vec![HomotopyExpr::Point, HomotopyExpr::Point],
        };
        assert_eq!(simplify(&rot), HomotopyExpr::circle(CircleTag::BaseL0));
    }

    #[test]
    fn simplify_is_idempotent_and_preserves_dimension() {
        let t = borromean(vec![KnotTree::cable(2, 5, trefoil()), fig8()]);
        let e = homotopy_type(&t).unwrap();
        let s = simplify(&e);
        assert_eq!(simplify(&s), s);
        assert_eq!(dimension(&s), dimension(&simplify(&s)));
    }

    #[test]
    fn rendering() {
        assert_eq!(render(&HomotopyExpr::Point), "*");
        assert_eq!(render(&torus_expr()), "S^1");
        assert_eq!(render(&simplify(&hyp_expr())), "(S^1)^2");
        let t = borromean(vec![fig8(), fig8()]);
        let e = simplify(&homotopy_type(&t).unwrap());
        assert_eq!(render(&e), "S^1 x ((S^1)^2 x (S^1)^2) x_{Z4} S^1");
    }
}
