//! The Gramain class, cocycle and pairing.
//!
//! The Gramain element is the rotation of the knot about its long axis.
//! Its H₁ image is the cabling circle on torus knots and cables, the
//! meridian circle on hyperbolic vertices, and the sum of the summands'
//! classes on a connected sum.  The cocycle follows the same recursion as
//! a projection, so both sides live naturally in presentation
//! coordinates and the pairing is their dot product.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::GroupError;
use crate::group::fp::BasisTag;
use crate::group::h1::{gen_count, h1_pres, reduce, sum_young};
use crate::group::braid::mixed_braid_group;
use crate::knot::KnotTree;
use crate::symmetry::canonical_form;

/// The shared recursion: 1 on the distinguished circle of each prime
/// vertex, the concatenation of summand vectors on sums, zero elsewhere
/// (including all braid coordinates).
fn gramain_vector(tree: &KnotTree) -> Result<Vec<BigInt>, GroupError> {
    Ok(match tree {
        KnotTree::Unknot => Vec::new(),
        KnotTree::Torus { .. } => vec![BigInt::from(1)],
        KnotTree::HypKnot { .. } => vec![BigInt::from(1), BigInt::zero()],
        KnotTree::Cable { companion, .. } => {
            let mut v = vec![BigInt::from(1)];
            v.extend(std::iter::repeat_with(BigInt::zero).take(gen_count(companion)?));
            v
        }
        KnotTree::HypSplice { children, .. } => {
            let mut v = vec![BigInt::from(1), BigInt::zero()];
            for c in children {
                v.extend(std::iter::repeat_with(BigInt::zero).take(gen_count(c)?));
            }
            v
        }
        KnotTree::Sum { summands } => {
            let mut v = Vec::new();
            for s in summands {
                v.extend(gramain_vector(s)?);
            }
            let young = sum_young(summands);
            let mixed = mixed_braid_group(summands.len(), &young)?;
            v.extend(std::iter::repeat_with(BigInt::zero).take(mixed.fp.gens.len()));
            v
        }
    })
}

/// `⟨g*, g_*(f)⟩`: 0 exactly on the unknot, the number of prime summands
/// otherwise.
pub fn gramain_pairing(tree: &KnotTree) -> Result<BigInt, GroupError> {
    let c = canonical_form(tree);
    let v = gramain_vector(&c)?;
    Ok(v.iter().map(|x| x.clone() * x.clone()).sum())
}

/// The Gramain class and cocycle over the reduced H₁ basis, with
/// metadata for the caller.
pub struct GramainReport {
    pub pairing: BigInt,
    /// Class coordinates: free basis first, then torsion generators.
    pub class: Vec<BigInt>,
    /// Cocycle coordinates over the free basis.
    pub cocycle: Vec<BigInt>,
    pub basis_tags: Vec<BasisTag>,
    pub torsion: Vec<u64>,
    /// True when the class has components in mixed (reduction-produced)
    /// coordinates, where the choice of lift is basis-dependent.
    pub lift_ambiguous: bool,
}

pub fn gramain_report(tree: &KnotTree) -> Result<GramainReport, GroupError> {
    let c = canonical_form(tree);
    let v = gramain_vector(&c)?;
    let pairing: BigInt = v.iter().map(|x| x.clone() * x.clone()).sum();
    let red = reduce(&h1_pres(&c)?);
    let class = red.push_class(&v);
    let cocycle = red
        .pull_cocycle(&v)
        .expect("the Gramain cocycle kills all relations");
    let quiet_span = red.quiet_len();
    let lift_ambiguous = class
        .iter()
        .enumerate()
        .any(|(i, x)| i >= quiet_span && !x.is_zero());
    Ok(GramainReport {
        pairing,
        class,
        cocycle,
        basis_tags: red.result.basis_tags.clone(),
        torsion: red.result.torsion.clone(),
        lift_ambiguous,
    })
}

/// Integer column vector of the Gramain class in the reduced basis.
pub fn gramain_class(tree: &KnotTree) -> Result<Vec<BigInt>, GroupError> {
    Ok(gramain_report(tree)?.class)
}

/// Integer row vector of the Gramain cocycle on the free basis.
pub fn gramain_cocycle(tree: &KnotTree) -> Result<Vec<BigInt>, GroupError> {
    Ok(gramain_report(tree)?.cocycle)
}
