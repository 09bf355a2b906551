//! Structural computation of H₁ and π₁ for knot-space components.
//!
//! Homology is assembled as an integer presentation: generators are the
//! circle factors (plus braid-abelianization generators at sum vertices),
//! relations are coinvariant identifications from twisted products and
//! summand identifications.  All reductions go through the Smith normal
//! form; the inversion map is carried along as an integer matrix in
//! matched structural bases.  Everything here works on canonical trees,
//! so class-equal subtrees are structurally identical.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::GroupError;
use crate::expr::{HomotopyExpr, MonodromyDatum, SetPartition};
use crate::group::braid::{braid_ab_transport, braid_perm, mixed_braid_group};
use crate::group::fp::{BasisTag, FpGroup, H1Result, Word};
use crate::group::matrix::{snf, Matrix, Snf};
use crate::knot::{validate, KnotTree};
use crate::symmetry::signed_perm::Sign;
use crate::symmetry::{canonical_form, canonical_splice_witness, compute_af, invert_class, is_invertible};

/// An abelian-group presentation: one tag per generator and a list of
/// relation vectors over the generators.
#[derive(Debug, Clone)]
pub struct PresAb {
    pub tags: Vec<BasisTag>,
    pub rels: Vec<Vec<BigInt>>,
}

impl PresAb {
    pub fn ngens(&self) -> usize {
        self.tags.len()
    }

    fn empty() -> PresAb {
        PresAb {
            tags: Vec::new(),
            rels: Vec::new(),
        }
    }
}

/// Generator count of the H₁ presentation of a (canonical) tree.
pub(crate) fn gen_count(tree: &KnotTree) -> Result<usize, GroupError> {
    Ok(match tree {
        KnotTree::Unknot => 0,
        KnotTree::Torus { .. } => 1,
        KnotTree::HypKnot { .. } => 2,
        KnotTree::Cable { companion, .. } => 1 + gen_count(companion)?,
        KnotTree::HypSplice { children, .. } => {
            let mut total = 2;
            for c in children {
                total += gen_count(c)?;
            }
            total
        }
        KnotTree::Sum { summands } => {
            let mut total = 0;
            for s in summands {
                total += gen_count(s)?;
            }
            let young = sum_young(summands);
            let mixed = mixed_braid_group(summands.len(), &young)?;
            total + mixed.fp.gens.len()
        }
    })
}

pub(crate) fn sum_young(summands: &[KnotTree]) -> SetPartition {
    SetPartition::from_equivalence(summands, |a, b| a == b)
}

fn offsets(children: &[KnotTree], base: usize) -> Result<Vec<usize>, GroupError> {
    let mut out = Vec::with_capacity(children.len() + 1);
    let mut acc = base;
    for c in children {
        out.push(acc);
        acc += gen_count(c)?;
    }
    out.push(acc);
    Ok(out)
}

/// H₁ presentation of a canonical tree.
pub(crate) fn h1_pres(tree: &KnotTree) -> Result<PresAb, GroupError> {
    match tree {
        KnotTree::Unknot => Ok(PresAb::empty()),
        KnotTree::Torus { .. } => Ok(PresAb {
            tags: vec![BasisTag::Cabling],
            rels: Vec::new(),
        }),
        KnotTree::HypKnot { .. } => Ok(PresAb {
            tags: vec![BasisTag::Meridian, BasisTag::Base],
            rels: Vec::new(),
        }),
        KnotTree::Cable { companion, .. } => {
            let inner = h1_pres(companion)?;
            let mut tags = vec![BasisTag::Cabling];
            tags.extend(inner.tags);
            let rels = inner
                .rels
                .into_iter()
                .map(|r| {
                    let mut v = vec![BigInt::zero()];
                    v.extend(r);
                    v
                })
                .collect();
            Ok(PresAb { tags, rels })
        }
        KnotTree::HypSplice { kgl, children, .. } => {
            let off = offsets(children, 2)?;
            let total = off[children.len()];
            let mut tags = vec![BasisTag::Meridian, BasisTag::Base];
            let mut rels: Vec<Vec<BigInt>> = Vec::new();
            for (i, c) in children.iter().enumerate() {
                let inner = h1_pres(c)?;
                tags.extend(inner.tags);
                for r in inner.rels {
                    let mut v = vec![BigInt::zero(); total];
                    for (k, x) in r.into_iter().enumerate() {
                        v[off[i] + k] = x;
                    }
                    rels.push(v);
                }
            }
            let af = compute_af(kgl, children)?;
            if af.order() > 1 {
                let phi = monodromy_matrix(kgl, children, &off)?;
                let span = total - 2;
                for j in 0..span {
                    let mut col = vec![BigInt::zero(); total];
                    for i in 0..span {
                        col[2 + i] = phi[(i, j)].clone();
                    }
                    col[2 + j] -= BigInt::one();
                    rels.push(col);
                }
            }
            Ok(PresAb { tags, rels })
        }
        KnotTree::Sum { summands } => {
            let n = summands.len();
            let off = offsets(summands, 0)?;
            let young = sum_young(summands);
            let mixed = mixed_braid_group(n, &young)?;
            let braid_off = off[n];
            let total = braid_off + mixed.fp.gens.len();
            let mut tags: Vec<BasisTag> = Vec::new();
            let mut rels: Vec<Vec<BigInt>> = Vec::new();
            for (i, s) in summands.iter().enumerate() {
                let inner = h1_pres(s)?;
                tags.extend(inner.tags);
                for r in inner.rels {
                    let mut v = vec![BigInt::zero(); total];
                    for (k, x) in r.into_iter().enumerate() {
                        v[off[i] + k] = x;
                    }
                    rels.push(v);
                }
            }
            tags.extend(vec![BasisTag::Other; mixed.fp.gens.len()]);
            // identifications inside each block: canonical identifications
            // act as the identity on matched structural bases
            for block in &young.blocks {
                let first = block[0];
                let span = off[first + 1] - off[first];
                for &other in &block[1..] {
                    for k in 0..span {
                        let mut v = vec![BigInt::zero(); total];
                        v[off[first] + k] = BigInt::one();
                        v[off[other] + k] = -BigInt::one();
                        rels.push(v);
                    }
                }
            }
            // abelianized braid relators
            let expo = mixed.fp.exponent_matrix();
            for r in 0..expo.rows() {
                let mut v = vec![BigInt::zero(); total];
                let mut nonzero = false;
                for c in 0..expo.cols() {
                    if !expo[(r, c)].is_zero() {
                        nonzero = true;
                    }
                    v[braid_off + c] = expo[(r, c)].clone();
                }
                if nonzero {
                    rels.push(v);
                }
            }
            Ok(PresAb { tags, rels })
        }
    }
}

/// Monodromy of the A_f generator on the direct sum of the children's H₁
/// presentations (block permutation with inversion matrices on the
/// sign-flipped slots).
fn monodromy_matrix(
    kgl: &crate::knot::KglDatum,
    children: &[KnotTree],
    off: &[usize],
) -> Result<Matrix<BigInt>, GroupError> {
    let af = compute_af(kgl, children)?;
    let sp = af.generator_image();
    let span = off[children.len()] - off[0];
    let base = off[0];
    let mut phi = Matrix::zero(span, span);
    for (i, c) in children.iter().enumerate() {
        let t = sp.target(i);
        let block = if sp.sign_from_source(i) == Sign::Minus {
            debug_assert_eq!(
                canonical_form(&invert_class(c)),
                children[t],
                "A_f preservation must match flipped slots"
            );
            inv_matrix(c)?
        } else {
            debug_assert_eq!(&children[t], c, "A_f preservation must match slots");
            Matrix::identity(gen_count(c)?)
        };
        phi.paste(off[t] - base, off[i] - base, &block);
    }
    Ok(phi)
}

/// Matrix of the inversion map from the H₁ presentation of `tree` to the
/// H₁ presentation of `canonical_form(invert_class(tree))`, in matched
/// structural bases.  Fails with `NonConcreteAction` when a splice vertex
/// without an inversion datum is involved.
pub(crate) fn inv_matrix(tree: &KnotTree) -> Result<Matrix<BigInt>, GroupError> {
    match tree {
        KnotTree::Unknot => Ok(Matrix::zero(0, 0)),
        KnotTree::Torus { .. } => Ok(neg_identity(1)),
        KnotTree::HypKnot { .. } => Ok(neg_identity(2)),
        KnotTree::Cable { companion, .. } => {
            let inner = inv_matrix(companion)?;
            let mut m = Matrix::zero(inner.rows() + 1, inner.cols() + 1);
            m[(0, 0)] = -BigInt::one();
            m.paste(1, 1, &inner);
            Ok(m)
        }
        KnotTree::HypSplice { kgl, children, .. } => {
            let Some(iota) = &kgl.inversion else {
                return Err(GroupError::NonConcreteAction(format!(
                    "KGL `{}` carries no inversion datum",
                    kgl.name
                )));
            };
            let inverted_children = iota.act_on(children, invert_class);
            let (target_children, j) = canonical_splice_witness(kgl, &inverted_children);
            let total = kgl.rho_gen.pow(j).compose(iota).expect("equal sizes");
            let src_off = offsets(children, 2)?;
            let tgt_off = offsets(&target_children, 2)?;
            let rows = tgt_off[children.len()];
            let cols = src_off[children.len()];
            let mut m = Matrix::zero(rows, cols);
            m[(0, 0)] = -BigInt::one();
            m[(1, 1)] = -BigInt::one();
            for (i, c) in children.iter().enumerate() {
                let t = total.target(i);
                // a double flip composes to the identity on classes and on
                // the matched bases, so only the net parity matters
                let block = if total.sign_from_source(i) == Sign::Minus {
                    inv_matrix(c)?
                } else {
                    Matrix::identity(gen_count(c)?)
                };
                m.paste(tgt_off[t], src_off[i], &block);
            }
            Ok(m)
        }
        KnotTree::Sum { summands } => {
            let n = summands.len();
            let inverted: Vec<KnotTree> = summands
                .iter()
                .map(|s| canonical_form(&invert_class(s)))
                .collect();
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| inverted[a].cmp(&inverted[b]).then(a.cmp(&b)));
            let mut position = vec![0usize; n];
            for (k, &slot) in order.iter().enumerate() {
                position[slot] = k;
            }
            let target: Vec<KnotTree> = order.iter().map(|&s| inverted[s].clone()).collect();
            let src_off = offsets(summands, 0)?;
            let tgt_off = offsets(&target, 0)?;
            let young_src = sum_young(summands);
            let young_tgt = sum_young(&target);
            let src_braid = mixed_braid_group(n, &young_src)?;
            let tgt_braid = mixed_braid_group(n, &young_tgt)?;
            let rows = tgt_off[n] + tgt_braid.fp.gens.len();
            let cols = src_off[n] + src_braid.fp.gens.len();
            let mut m = Matrix::zero(rows, cols);
            for (i, s) in summands.iter().enumerate() {
                let block = inv_matrix(s)?;
                m.paste(tgt_off[position[i]], src_off[i], &block);
            }
            // knot inversion acts on the configuration space by mirror
            // reflection: minus one composed with the slot relabeling
            let transport = braid_ab_transport(&src_braid, &tgt_braid, &position)?;
            m.paste(tgt_off[n], src_off[n], &transport.neg());
            Ok(m)
        }
    }
}

fn neg_identity(n: usize) -> Matrix<BigInt> {
    let mut m = Matrix::zero(n, n);
    for i in 0..n {
        m[(i, i)] = -BigInt::one();
    }
    m
}

/// The reduced form of an H₁ presentation: untouched generators pass
/// through with their tags, the rest go through one Smith normal form.
pub struct Reduced {
    pub result: H1Result,
    quiet: Vec<usize>,
    active: Vec<usize>,
    reduction: Option<Snf<BigInt>>,
    diag: Vec<BigInt>,
    free_coords: Vec<usize>,
    torsion_coords: Vec<(usize, BigInt)>,
    /// The presentation matrix handed to the SNF (columns = relations).
    pub active_pres: Matrix<BigInt>,
}

pub fn reduce(pres: &PresAb) -> Reduced {
    let k = pres.ngens();
    let mut touched = vec![false; k];
    for r in &pres.rels {
        for (i, x) in r.iter().enumerate() {
            if !x.is_zero() {
                touched[i] = true;
            }
        }
    }
    let quiet: Vec<usize> = (0..k).filter(|&i| !touched[i]).collect();
    let active: Vec<usize> = (0..k).filter(|&i| touched[i]).collect();
    // columns = relations, restricted to active generators
    let active_pres = Matrix::from_fn(active.len(), pres.rels.len(), |i, j| {
        pres.rels[j][active[i]].clone()
    });
    let (reduction, diag) = if active.is_empty() {
        (None, Vec::new())
    } else {
        let s = snf(&active_pres);
        let d = s.diagonal();
        (Some(s), d)
    };
    let mut free_coords = Vec::new();
    let mut torsion_coords = Vec::new();
    for i in 0..active.len() {
        let d = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            free_coords.push(i);
        } else if !d.is_one() {
            torsion_coords.push((i, d));
        }
    }
    let mut tags: Vec<BasisTag> = quiet.iter().map(|&i| pres.tags[i]).collect();
    tags.extend(vec![BasisTag::Other; free_coords.len()]);
    let torsion: Vec<u64> = torsion_coords
        .iter()
        .map(|(_, d)| u64::try_from(d).expect("torsion fits in u64"))
        .collect();
    let result = H1Result {
        rank: quiet.len() + free_coords.len(),
        torsion,
        basis_tags: tags,
    };
    Reduced {
        result,
        quiet,
        active,
        reduction,
        diag,
        free_coords,
        torsion_coords,
        active_pres,
    }
}

impl Reduced {
    fn u(&self) -> &Matrix<BigInt> {
        &self.reduction.as_ref().unwrap().u
    }

    fn u_inv(&self) -> &Matrix<BigInt> {
        &self.reduction.as_ref().unwrap().u_inv
    }

    /// Basis size: free rank plus torsion generators.
    pub fn basis_len(&self) -> usize {
        self.result.rank + self.torsion_coords.len()
    }

    /// Number of untouched generators leading the reduced basis.
    pub fn quiet_len(&self) -> usize {
        self.quiet.len()
    }

    /// Pushes a presentation-level class vector into the reduced basis
    /// (free coordinates first, then torsion coordinates mod their
    /// orders).
    pub fn push_class(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.quiet.len() + self.active.len());
        let mut out: Vec<BigInt> = self.quiet.iter().map(|&i| v[i].clone()).collect();
        if !self.active.is_empty() {
            let xa: Vec<BigInt> = self.active.iter().map(|&i| v[i].clone()).collect();
            let y = self.u().mul_vec(&xa);
            for &i in &self.free_coords {
                out.push(y[i].clone());
            }
            for (i, d) in &self.torsion_coords {
                out.push(modulo(&y[*i], d));
            }
        }
        out
    }

    /// Expresses a presentation-level cocycle (a functional vanishing on
    /// all relations) over the free part of the reduced basis.
    pub fn pull_cocycle(&self, r: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(r.len(), self.quiet.len() + self.active.len());
        let mut out: Vec<BigInt> = self.quiet.iter().map(|&i| r[i].clone()).collect();
        if !self.active.is_empty() {
            let ra: Vec<BigInt> = self.active.iter().map(|&i| r[i].clone()).collect();
            // row vector times U^{-1}
            let prime = self.u_inv().transpose().mul_vec(&ra);
            for (i, d) in self.diag.iter().enumerate() {
                if !d.is_zero() && !prime[i].is_zero() {
                    return None;
                }
            }
            for &i in &self.free_coords {
                out.push(prime[i].clone());
            }
        }
        Some(out)
    }

    /// The matrix induced on the reduced basis by a presentation-level
    /// endomorphism that maps the relation lattice into itself.  Torsion
    /// rows are reduced modulo their invariant factor.
    pub fn endo_matrix(&self, m: &Matrix<BigInt>) -> Matrix<BigInt> {
        let k = self.quiet.len() + self.active.len();
        assert_eq!((m.rows(), m.cols()), (k, k));
        // quiet and active parts never mix
        for &q in &self.quiet {
            for &a in &self.active {
                assert!(m[(q, a)].is_zero() && m[(a, q)].is_zero(), "mixed block");
            }
        }
        let nb = self.basis_len();
        let mut out = Matrix::zero(nb, nb);
        for (r, &qi) in self.quiet.iter().enumerate() {
            for (c, &qj) in self.quiet.iter().enumerate() {
                out[(r, c)] = m[(qi, qj)].clone();
            }
        }
        if !self.active.is_empty() {
            let a = Matrix::from_fn(self.active.len(), self.active.len(), |i, j| {
                m[(self.active[i], self.active[j])].clone()
            });
            let prime = self.u().mul(&a).mul(self.u_inv());
            let coords: Vec<usize> = self
                .free_coords
                .iter()
                .copied()
                .chain(self.torsion_coords.iter().map(|(i, _)| *i))
                .collect();
            let qn = self.quiet.len();
            for (r, &yr) in coords.iter().enumerate() {
                for (c, &yc) in coords.iter().enumerate() {
                    let mut val = prime[(yr, yc)].clone();
                    if r >= self.free_coords.len() {
                        let d = &self.torsion_coords[r - self.free_coords.len()].1;
                        val = modulo(&val, d);
                    }
                    out[(qn + r, qn + c)] = val;
                }
            }
        }
        out
    }

    /// Reduces torsion rows of a basis-sized matrix (used when composing
    /// involution matrices).
    pub fn normalize_endo(&self, m: &Matrix<BigInt>) -> Matrix<BigInt> {
        let qn = self.quiet.len() + self.free_coords.len();
        Matrix::from_fn(m.rows(), m.cols(), |r, c| {
            if r >= qn {
                modulo(&m[(r, c)], &self.torsion_coords[r - qn].1)
            } else {
                m[(r, c)].clone()
            }
        })
    }
}

fn modulo(a: &BigInt, d: &BigInt) -> BigInt {
    let r = a % d;
    if r.is_negative() {
        r + d.abs()
    } else {
        r
    }
}

/// First homology of the component described by `tree` (with `expr` its
/// simplified homotopy type, kept as a cross-check input).
pub fn h1(expr: &HomotopyExpr, tree: &KnotTree) -> Result<H1Result, GroupError> {
    debug_assert!(validate(tree).is_valid());
    let _ = expr;
    let c = canonical_form(tree);
    Ok(reduce(&h1_pres(&c)?).result)
}

/// Like `h1`, but cross-checks the Smith-normal-form reduction against
/// the naive oracle reduction; returns the result and the number of
/// checks performed.
pub fn h1_verified(tree: &KnotTree) -> Result<(H1Result, usize), GroupError> {
    let c = canonical_form(tree);
    let red = reduce(&h1_pres(&c)?);
    let mut checks = 0;
    if red.active_pres.rows() > 0 {
        let snf_factors: Vec<BigInt> = red
            .diag
            .iter()
            .filter(|d| !d.is_zero())
            .cloned()
            .collect();
        let naive = crate::oracle::naive_invariant_factors(&red.active_pres);
        if snf_factors != naive {
            return Err(GroupError::NonConcreteAction(format!(
                "oracle mismatch: snf {:?} vs naive {:?}",
                snf_factors, naive
            )));
        }
        checks += 1;
    }
    Ok((red.result, checks))
}

/// The induced map of the inversion on H₁ in the reduced canonical
/// basis.  Requires an invertible class.
pub fn i_star(tree: &KnotTree) -> Result<Matrix<BigInt>, GroupError> {
    if !is_invertible(tree) {
        return Err(GroupError::NotInvertible);
    }
    let c = canonical_form(tree);
    let m = inv_matrix(&c)?;
    let red = reduce(&h1_pres(&c)?);
    Ok(red.endo_matrix(&m))
}

/// Structural description of π₁ as iterated extensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtensionTree {
    Trivial,
    Z,
    Direct(Vec<ExtensionTree>),
    SemidirectZ {
        fibers: Vec<ExtensionTree>,
        monodromy: MonodromyDatum,
        twist_order: u64,
    },
    BraidExtension {
        kernel: Vec<ExtensionTree>,
        n: usize,
        young: SetPartition,
        quotient: FpGroup,
        /// Permutation image of each quotient generator in Σₙ.
        quotient_perms: Vec<Vec<usize>>,
    },
}

/// π₁ of a simplified homotopy expression, as an extension tree.
pub fn pi1_structure(e: &HomotopyExpr) -> Result<ExtensionTree, GroupError> {
    Ok(match e {
        HomotopyExpr::Point => ExtensionTree::Trivial,
        HomotopyExpr::Circle { .. } => ExtensionTree::Z,
        HomotopyExpr::Product { factors } => ExtensionTree::Direct(
            factors
                .iter()
                .map(pi1_structure)
                .collect::<Result<_, _>>()?,
        ),
        HomotopyExpr::TwistedProduct {
            order, monodromy, fibers,
        } => ExtensionTree::SemidirectZ {
            fibers: fibers
                .iter()
                .map(pi1_structure)
                .collect::<Result<_, _>>()?,
            monodromy: monodromy.clone(),
            twist_order: *order,
        },
        HomotopyExpr::Config2ModYoung { n, young, factors } => {
            let mixed = mixed_braid_group(*n, young)?;
            let perms = mixed
                .gen_words
                .iter()
                .map(|w| braid_perm(*n, w))
                .collect();
            ExtensionTree::BraidExtension {
                kernel: factors
                    .iter()
                    .map(pi1_structure)
                    .collect::<Result<_, _>>()?,
                n: *n,
                young: young.clone(),
                quotient: mixed.fp.clone(),
                quotient_perms: perms,
            }
        }
    })
}

pub fn render_extension(e: &ExtensionTree) -> String {
    match e {
        ExtensionTree::Trivial => "1".into(),
        ExtensionTree::Z => "Z".into(),
        ExtensionTree::Direct(parts) => parts
            .iter()
            .map(|p| match p {
                ExtensionTree::Trivial | ExtensionTree::Z => render_extension(p),
                _ => format!("({})", render_extension(p)),
            })
            .collect::<Vec<_>>()
            .join(" x "),
        ExtensionTree::SemidirectZ {
            fibers, monodromy, twist_order,
        } => {
            let fiber = if fibers.len() == 1 {
                render_extension(&fibers[0])
            } else {
                render_extension(&ExtensionTree::Direct(fibers.clone()))
            };
            format!(
                "({}) >| Z  [twist order {}, monodromy {}]",
                fiber, twist_order, monodromy.sp
            )
        }
        ExtensionTree::BraidExtension { kernel, n, young, .. } => {
            let k = render_extension(&ExtensionTree::Direct(kernel.clone()));
            format!(
                "1 -> ({}) -> G -> B{}^{{{}}} -> 1  [split]",
                k,
                n,
                young.young_label()
            )
        }
    }
}

/// A flat presentation of π₁ where the monodromy data pin one down:
/// circle-built towers whose sign-flips hit only abelian (circles-only)
/// fibers, and braid extensions over such factors.  Returns `None`
/// otherwise.
pub fn flat_presentation(e: &ExtensionTree) -> Option<FpGroup> {
    let mut namer = Namer::default();
    flat(e, &mut namer)
}

#[derive(Default)]
struct Namer {
    circles: usize,
    twists: usize,
    braids: usize,
}

/// One assembled piece of a flat presentation.
struct FlatPart {
    fp: FpGroup,
    abelian: bool,
}

fn flat(e: &ExtensionTree, namer: &mut Namer) -> Option<FpGroup> {
    Some(assemble(e, namer)?.fp)
}

fn assemble(e: &ExtensionTree, namer: &mut Namer) -> Option<FlatPart> {
    match e {
        ExtensionTree::Trivial => Some(FlatPart {
            fp: FpGroup::free(Vec::new()),
            abelian: true,
        }),
        ExtensionTree::Z => {
            namer.circles += 1;
            Some(FlatPart {
                fp: FpGroup::free(vec![format!("a{}", namer.circles)]),
                abelian: true,
            })
        }
        ExtensionTree::Direct(parts) => {
            let assembled: Vec<FlatPart> = parts
                .iter()
                .map(|p| assemble(p, namer))
                .collect::<Option<_>>()?;
            Some(direct_product(assembled))
        }
        ExtensionTree::SemidirectZ {
            fibers, monodromy, twist_order: _,
        } => {
            let assembled: Vec<FlatPart> = fibers
                .iter()
                .map(|p| assemble(p, namer))
                .collect::<Option<_>>()?;
            // a sign-flip is pinned down only on abelian fibers
            for (i, flipped) in monodromy.per_slot_inverted.iter().enumerate() {
                if *flipped && !assembled[i].abelian {
                    return None;
                }
            }
            let spans: Vec<usize> = assembled.iter().map(|a| a.fp.gens.len()).collect();
            if spans
                .iter()
                .enumerate()
                .any(|(i, &s)| s != spans[monodromy.sp.target(i)])
            {
                return None;
            }
            let product = direct_product(assembled);
            let mut gens = product.fp.gens.clone();
            namer.twists += 1;
            let t = gens.len() as i32 + 1;
            gens.push(format!("t{}", namer.twists));
            let mut relators = product.fp.relators.clone();
            // offsets of each fiber block inside the product
            let mut offsets = Vec::with_capacity(spans.len());
            let mut acc = 0usize;
            for s in &spans {
                offsets.push(acc);
                acc += s;
            }
            for (i, &span) in spans.iter().enumerate() {
                let tgt = monodromy.sp.target(i);
                let flip = monodromy.per_slot_inverted[i];
                for k in 0..span {
                    let x = (offsets[i] + k) as i32 + 1;
                    let image = (offsets[tgt] + k) as i32 + 1;
                    let image = if flip { -image } else { image };
                    // t x t^{-1} = image
                    relators.push(vec![t, x, -t, -image]);
                }
            }
            Some(FlatPart {
                fp: FpGroup { gens, relators },
                abelian: false,
            })
        }
        ExtensionTree::BraidExtension {
            kernel,
            quotient,
            quotient_perms,
            ..
        } => {
            let assembled: Vec<FlatPart> = kernel
                .iter()
                .map(|p| assemble(p, namer))
                .collect::<Option<_>>()?;
            let spans: Vec<usize> = assembled.iter().map(|a| a.fp.gens.len()).collect();
            for perm in quotient_perms {
                for (i, &t) in perm.iter().enumerate() {
                    if spans[i] != spans[t] {
                        return None;
                    }
                }
            }
            let product = direct_product(assembled);
            let base = product.fp.gens.len();
            let mut gens = product.fp.gens.clone();
            for _ in &quotient.gens {
                namer.braids += 1;
                gens.push(format!("b{}", namer.braids));
            }
            let mut relators = product.fp.relators.clone();
            for r in &quotient.relators {
                relators.push(
                    r.iter()
                        .map(|&x| {
                            let shifted = x.unsigned_abs() as i32 + base as i32;
                            if x > 0 {
                                shifted
                            } else {
                                -shifted
                            }
                        })
                        .collect(),
                );
            }
            let mut offsets = Vec::with_capacity(spans.len());
            let mut acc = 0usize;
            for s in &spans {
                offsets.push(acc);
                acc += s;
            }
            for (bi, perm) in quotient_perms.iter().enumerate() {
                let b = (base + bi) as i32 + 1;
                for (i, &t) in perm.iter().enumerate() {
                    for k in 0..spans[i] {
                        let x = (offsets[i] + k) as i32 + 1;
                        let image = (offsets[t] + k) as i32 + 1;
                        relators.push(vec![b, x, -b, -image]);
                    }
                }
            }
            Some(FlatPart {
                fp: FpGroup { gens, relators },
                abelian: false,
            })
        }
    }
}

fn direct_product(parts: Vec<FlatPart>) -> FlatPart {
    let mut gens = Vec::new();
    let mut relators: Vec<Word> = Vec::new();
    let mut offsets = Vec::new();
    for p in &parts {
        offsets.push(gens.len());
        let base = gens.len() as i32;
        gens.extend(p.fp.gens.iter().cloned());
        for r in &p.fp.relators {
            relators.push(
                r.iter()
                    .map(|&x| if x > 0 { x + base } else { x - base })
                    .collect(),
            );
        }
    }
    // commutators between distinct parts
    for (pi, p) in parts.iter().enumerate() {
        for (qi, q) in parts.iter().enumerate() {
            if qi <= pi {
                continue;
            }
            for a in 0..p.fp.gens.len() {
                for b in 0..q.fp.gens.len() {
                    let x = (offsets[pi] + a) as i32 + 1;
                    let y = (offsets[qi] + b) as i32 + 1;
                    relators.push(vec![x, y, -x, -y]);
                }
            }
        }
    }
    let abelian = parts.iter().all(|p| p.abelian);
    FlatPart {
        fp: FpGroup { gens, relators },
        abelian,
    }
}
