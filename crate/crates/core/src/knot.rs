//! Companionship trees, KGL decorations, validation and the built-in
//! catalog.
//!
//! A `KnotTree` names an isotopy class of long knot by its companionship
//! tree: leaves are the unknot, torus knots and hyperbolic knots, and
//! internal vertices are cables, connected sums and hyperbolic splices.
//! Splice vertices are decorated with a `KglDatum` recording the cyclic
//! symmetry group of the link complement and its action on the companion
//! slots.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{KnotError, ValidationReport, Violation};
use crate::symmetry::signed_perm::{Sign, SignedPerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Orientation {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Orientation {
    pub fn flip(self) -> Orientation {
        match self {
            Orientation::Plus => Orientation::Minus,
            Orientation::Minus => Orientation::Plus,
        }
    }
}

/// Decoration of a hyperbolic splice vertex: the cyclic symmetry group
/// `B_L` of the KGL complement, its image on the companion slots, and the
/// optional inversion datum `ι`.
///
/// KGL data are trusted inputs; nothing here checks hyperbolicity or that
/// `rho_gen` is realized by isometries.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct KglDatum {
    pub name: String,
    pub n: usize,
    pub b_order: u64,
    pub rho_gen: SignedPerm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inversion: Option<SignedPerm>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum KnotTree {
    Unknot,
    Torus {
        p: i64,
        q: i64,
    },
    HypKnot {
        name: String,
        invertible: bool,
        orientation: Orientation,
    },
    Cable {
        p: i64,
        q: i64,
        companion: Box<KnotTree>,
    },
    Sum {
        summands: Vec<KnotTree>,
    },
    #[serde(rename = "splice")]
    HypSplice {
        kgl: KglDatum,
        children: Vec<KnotTree>,
        /// Formal inverse marker: the class of the inverted knot when the
        /// KGL carries no inversion datum.  Compares unequal to the
        /// unmarked class; double marking cancels.
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        inverse_marker: bool,
    },
}

impl KnotTree {
    pub fn hyp(name: &str, invertible: bool) -> KnotTree {
        KnotTree::HypKnot {
            name: name.into(),
            invertible,
            orientation: Orientation::Plus,
        }
    }

    pub fn torus(p: i64, q: i64) -> KnotTree {
        KnotTree::Torus { p, q }
    }

    pub fn cable(p: i64, q: i64, companion: KnotTree) -> KnotTree {
        KnotTree::Cable {
            p,
            q,
            companion: Box::new(companion),
        }
    }

    pub fn sum(summands: Vec<KnotTree>) -> KnotTree {
        KnotTree::Sum { summands }
    }

    pub fn splice(kgl: KglDatum, children: Vec<KnotTree>) -> KnotTree {
        KnotTree::HypSplice {
            kgl,
            children,
            inverse_marker: false,
        }
    }

    pub fn is_unknot(&self) -> bool {
        matches!(self, KnotTree::Unknot)
    }
}

fn ident_ok(name: &str) -> bool {
    !name.is_empty()
        && name.chars().next().unwrap().is_ascii_alphabetic()
        && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn walk(tree: &KnotTree, path: &str, out: &mut Vec<Violation>) {
    let hard = |out: &mut Vec<Violation>, msg: String| {
        out.push(Violation {
            path: path.to_string(),
            message: msg,
            flattening: false,
        })
    };
    match tree {
        KnotTree::Unknot => {}
        KnotTree::Torus { p, q } => {
            if p.abs() < 2 || q.abs() < 2 {
                hard(out, format!("torus({},{}) requires |p| >= 2 and |q| >= 2", p, q));
            }
            if p.abs().gcd(&q.abs()) != 1 {
                hard(out, format!("torus({},{}) requires gcd(|p|,|q|) = 1", p, q));
            }
        }
        KnotTree::HypKnot {
            name, invertible, orientation,
        } => {
            if !ident_ok(name) {
                hard(out, format!("hyperbolic knot name `{}` is not an identifier", name));
            }
            if *invertible && *orientation == Orientation::Minus {
                hard(
                    out,
                    "invertible hyperbolic knot carries a flipped orientation bit".into(),
                );
            }
        }
        KnotTree::Cable { p, q, companion } => {
            if p.abs().gcd(&q.abs()) != 1 {
                hard(out, format!("cable({},{}) requires gcd(|p|,|q|) = 1", p, q));
            }
            if companion.is_unknot() {
                out.push(Violation {
                    path: path.to_string(),
                    message: "cable of the unknot must be rewritten as a torus knot".into(),
                    flattening: true,
                });
            } else {
                walk(companion, &format!("{}.0", path), out);
            }
        }
        KnotTree::Sum { summands } => {
            if summands.len() < 2 {
                hard(out, format!("sum requires at least 2 summands, found {}", summands.len()));
            }
            for (i, s) in summands.iter().enumerate() {
                let child_path = format!("{}.{}", path, i);
                match s {
                    KnotTree::Sum { .. } => {
                        out.push(Violation {
                            path: child_path.clone(),
                            message: "nested sum must be flattened".into(),
                            flattening: true,
                        });
                        walk(s, &child_path, out);
                    }
                    KnotTree::Unknot => hard(out, format!("Unknot summand at index {}", i)),
                    _ => walk(s, &child_path, out),
                }
            }
        }
        KnotTree::HypSplice {
            kgl, children, inverse_marker,
        } => {
            if !ident_ok(&kgl.name) {
                hard(out, format!("KGL name `{}` is not an identifier", kgl.name));
            }
            if kgl.n == 0 {
                hard(out, "splice vertex requires n >= 1 companion slots".into());
            }
            if children.len() != kgl.n {
                hard(
                    out,
                    format!("children length {} != n={}", children.len(), kgl.n),
                );
            }
            if kgl.b_order == 0 {
                hard(out, "B_L order must be >= 1".into());
            }
            if kgl.rho_gen.n() != kgl.n {
                hard(
                    out,
                    format!(
                        "rho acts on {} letters but n={}",
                        kgl.rho_gen.n(),
                        kgl.n
                    ),
                );
            } else if kgl.b_order % kgl.rho_gen.order() != 0 {
                hard(
                    out,
                    format!(
                        "order({}) = {} does not divide B_L order {}",
                        kgl.rho_gen,
                        kgl.rho_gen.order(),
                        kgl.b_order
                    ),
                );
            }
            if let Some(iota) = &kgl.inversion {
                if iota.n() != kgl.n {
                    hard(
                        out,
                        format!("inversion datum acts on {} letters but n={}", iota.n(), kgl.n),
                    );
                } else if !iota.compose(iota).expect("equal sizes").is_identity() {
                    hard(
                        out,
                        format!("inversion datum {} is not an involution", iota),
                    );
                }
                if *inverse_marker {
                    hard(
                        out,
                        "formal inverse marker on a vertex that carries an inversion datum".into(),
                    );
                }
            }
            for (i, c) in children.iter().enumerate() {
                let child_path = format!("{}.{}", path, i);
                if c.is_unknot() {
                    hard(out, format!("Unknot companion at slot {}", i));
                } else {
                    walk(c, &child_path, out);
                }
            }
        }
    }
}

/// Checks every module invariant, returning all violations with tree
/// paths.  An empty report means the tree is valid.
pub fn validate(tree: &KnotTree) -> ValidationReport {
    let mut violations = Vec::new();
    walk(tree, ".", &mut violations);
    ValidationReport { violations }
}

/// Flattens nested sums and rewrites cables of the unknot as torus knots.
/// Any remaining violation is an error.
pub fn normalize(tree: &KnotTree) -> Result<KnotTree, KnotError> {
    let out = normalize_raw(tree);
    let report = validate(&out);
    if report.is_valid() {
        Ok(out)
    } else {
        Err(KnotError::InvalidTree(report))
    }
}

fn normalize_raw(tree: &KnotTree) -> KnotTree {
    match tree {
        KnotTree::Unknot | KnotTree::Torus { .. } | KnotTree::HypKnot { .. } => tree.clone(),
        KnotTree::Cable { p, q, companion } => {
            let companion = normalize_raw(companion);
            if companion.is_unknot() {
                KnotTree::torus(*p, *q)
            } else {
                KnotTree::cable(*p, *q, companion)
            }
        }
        KnotTree::Sum { summands } => {
            let mut flat = Vec::new();
            for s in summands {
                match normalize_raw(s) {
                    KnotTree::Sum { summands } => flat.extend(summands),
                    other => flat.push(other),
                }
            }
            KnotTree::Sum { summands: flat }
        }
        KnotTree::HypSplice {
            kgl, children, inverse_marker,
        } => KnotTree::HypSplice {
            kgl: kgl.clone(),
            children: children.iter().map(normalize_raw).collect(),
            inverse_marker: *inverse_marker,
        },
    }
}

/// Entries of the built-in catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogEntry {
    Kgl(KglDatum),
    Tree(KnotTree),
}

/// The built-in catalog of KGL data and named tree shorthands from the
/// worked examples and the two representation families.
pub struct Catalog;

impl Catalog {
    /// Looks up a catalog name.  The representation families accept both
    /// `stoimenow(n)`/`sakuma(n)` and the identifier forms
    /// `stoimenowN`/`sakumaN` used by the DSL.
    pub fn get(name: &str) -> Result<CatalogEntry, KnotError> {
        let unknown = || KnotError::UnknownName(name.to_string());
        match name {
            "borromean" => Ok(CatalogEntry::Kgl(KglDatum {
                name: "borromean".into(),
                n: 2,
                b_order: 4,
                rho_gen: SignedPerm::parse_cycles(2, "(1 2 -)").unwrap(),
                // each companion disc returns to itself with the long axis
                // reversed under the inversion isotopy
                inversion: Some(SignedPerm::parse_cycles(2, "(1 -)(2 -)").unwrap()),
            })),
            "whitehead" => Ok(CatalogEntry::Kgl(KglDatum {
                name: "whitehead".into(),
                n: 1,
                b_order: 2,
                rho_gen: SignedPerm::parse_cycles(1, "(1 -)").unwrap(),
                inversion: Some(SignedPerm::parse_cycles(1, "(1 -)").unwrap()),
            })),
            "link6_3_2" => Ok(CatalogEntry::Kgl(KglDatum {
                name: "link6_3_2".into(),
                n: 1,
                b_order: 2,
                rho_gen: SignedPerm::identity(1),
                inversion: Some(SignedPerm::parse_cycles(1, "(1 -)").unwrap()),
            })),
            "fig8" => Ok(CatalogEntry::Tree(KnotTree::hyp("fig8", true))),
            "trefoil" => Ok(CatalogEntry::Tree(KnotTree::torus(2, 3))),
            _ => {
                if let Some(n) = parse_family(name, "stoimenow") {
                    if n == 0 {
                        return Err(unknown());
                    }
                    let cycle: Vec<usize> = (1..=n).collect();
                    let mut perm: Vec<usize> = (0..n).collect();
                    for w in 0..n {
                        perm[cycle[w] - 1] = cycle[(w + 1) % n] - 1;
                    }
                    return Ok(CatalogEntry::Kgl(KglDatum {
                        name: format!("stoimenow{}", n),
                        n,
                        b_order: n as u64,
                        rho_gen: SignedPerm::new(perm, vec![Sign::Plus; n]).unwrap(),
                        inversion: None,
                    }));
                }
                if let Some(n) = parse_family(name, "sakuma") {
                    if n == 0 || n % 2 == 0 {
                        return Err(unknown());
                    }
                    let body: String = (1..=n).map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
                    return Ok(CatalogEntry::Kgl(KglDatum {
                        name: format!("sakuma{}", n),
                        n,
                        b_order: 2 * n as u64,
                        rho_gen: SignedPerm::parse_cycles(n, &format!("({} -)", body)).unwrap(),
                        inversion: None,
                    }));
                }
                Err(unknown())
            }
        }
    }

    pub fn get_kgl(name: &str) -> Result<KglDatum, KnotError> {
        match Self::get(name)? {
            CatalogEntry::Kgl(k) => Ok(k),
            CatalogEntry::Tree(_) => Err(KnotError::UnknownName(format!(
                "{} (names a knot, not a KGL)",
                name
            ))),
        }
    }

    /// Names of the fixed entries plus the two parameterized families.
    pub fn names() -> Vec<String> {
        let mut names: Vec<String> = ["borromean", "whitehead", "link6_3_2", "fig8", "trefoil"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        names.push("stoimenowN (any N >= 1)".into());
        names.push("sakumaN (odd N)".into());
        names
    }
}

fn parse_family(name: &str, prefix: &str) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    let rest = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .unwrap_or(rest);
    rest.parse().ok()
}
