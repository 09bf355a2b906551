//! Braid groups and their mixed subgroups: the preimage of a Young
//! subgroup under `B_n -> Σ_n`, presented by coset enumeration followed
//! by Reidemeister-Schreier rewriting from the standard presentation.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;

use crate::error::GroupError;
use crate::expr::SetPartition;
use crate::group::coset::{reidemeister_schreier, todd_coxeter, SchreierData, DEFAULT_COSET_LIMIT};
use crate::group::fp::{abelianization, free_reduce, invert_word, tietze_simplify, FpGroup, H1Result, Word};
use crate::group::matrix::Matrix;

/// The standard presentation of the braid group on `n` strands.
pub fn braid_presentation(n: usize) -> FpGroup {
    assert!(n >= 1);
    let gens: Vec<String> = (1..n).map(|i| format!("s{}", i)).collect();
    let mut relators: Vec<Word> = Vec::new();
    for i in 1..n as i32 {
        for j in i + 1..n as i32 {
            if j == i + 1 {
                relators.push(vec![i, j, i, -j, -i, -j]);
            } else {
                relators.push(vec![i, j, -i, -j]);
            }
        }
    }
    FpGroup { gens, relators }
}

/// Image of a braid word in Σₙ, as the map `strand position -> position`,
/// letters applied left to right.
pub fn braid_perm(n: usize, word: &Word) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    for &x in word {
        let g = x.unsigned_abs() as usize - 1;
        // sigma_g and its inverse both induce the transposition (g, g+1)
        p.swap(g, g + 1);
    }
    p
}

/// A positive braid word whose permutation image is `p`.
pub fn word_for_perm(p: &[usize]) -> Word {
    let n = p.len();
    let mut cur: Vec<usize> = (0..n).collect();
    let mut word: Word = Vec::new();
    // bubble cur towards p by adjacent swaps
    while cur != p {
        let mut progressed = false;
        for g in 0..n - 1 {
            // find the positions of p's values in cur and sort by target
            let pos_a = p.iter().position(|&v| v == cur[g]).unwrap();
            let pos_b = p.iter().position(|&v| v == cur[g + 1]).unwrap();
            if pos_a > pos_b {
                cur.swap(g, g + 1);
                word.push(g as i32 + 1);
                progressed = true;
            }
        }
        assert!(progressed, "bubble sort must progress");
    }
    debug_assert_eq!(braid_perm(n, &word), p);
    word
}

/// The band generator `σ_{ij}` (`0 ≤ i < j < n`): a half twist of strands
/// `i` and `j` in front of the strands between them.  Its permutation
/// image is the transposition `(i j)`.
pub fn band_word(i: usize, j: usize) -> Word {
    assert!(i < j);
    let mut w: Word = Vec::new();
    for k in ((i + 1)..j).rev() {
        w.push(k as i32 + 1);
    }
    w.push(i as i32 + 1);
    for k in (i + 1)..j {
        w.push(-(k as i32 + 1));
    }
    w
}

/// The pure braid generator `A_{ij} = σ_{ij}²`.
pub fn pure_gen_word(i: usize, j: usize) -> Word {
    let band = band_word(i, j);
    let mut w = band.clone();
    let mut again = band;
    w.append(&mut again);
    free_reduce(&w)
}

/// The mixed braid group `B_n^{Σ_f}` together with the rewriting data
/// needed to express subgroup words in its simplified generators.
pub struct MixedBraid {
    pub n: usize,
    pub young: SetPartition,
    pub coset_count: usize,
    /// Tietze-simplified presentation.
    pub fp: FpGroup,
    schreier: SchreierData,
    /// Abelianized images of the raw Schreier generators over `fp`'s
    /// generators.
    ab_images: Matrix<BigInt>,
    /// Braid words for the simplified generators.
    pub gen_words: Vec<Word>,
}

impl MixedBraid {
    pub fn abelianization(&self) -> H1Result {
        abelianization(&self.fp)
    }

    /// Abelianized coordinates (over the simplified generators) of a
    /// braid word lying in the subgroup.
    pub fn word_ab(&self, word: &Word) -> Result<Vec<BigInt>, GroupError> {
        let raw = self.schreier.rewrite(word)?;
        let mut v = vec![BigInt::from(0); self.fp.gens.len()];
        for &x in &raw {
            let idx = x.unsigned_abs() as usize - 1;
            let sgn = BigInt::from(x.signum());
            for c in 0..self.fp.gens.len() {
                let t = v[c].clone() + sgn.clone() * self.ab_images[(idx, c)].clone();
                v[c] = t;
            }
        }
        Ok(v)
    }
}

/// Computes `B_n^{Σ_f}` by Todd-Coxeter enumeration of the preimage of
/// the Young subgroup (generated by the pure braid generators and the
/// band generators of same-block pairs), then Reidemeister-Schreier
/// rewriting and Tietze simplification.  The coset count is verified
/// against the Young index `[Σₙ : Σ_f]`.
pub fn mixed_braid_group_with_limit(
    n: usize,
    young: &SetPartition,
    limit: usize,
) -> Result<Arc<MixedBraid>, GroupError> {
    assert!(n >= 1 && young.n == n, "partition size must match n");
    if let Some(hit) = cache_get(n, young) {
        return Ok(hit);
    }
    let braid = braid_presentation(n);
    let mut subgens: Vec<Word> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            subgens.push(pure_gen_word(i, j));
            if young.block_of(i) == young.block_of(j) {
                subgens.push(band_word(i, j));
            }
        }
    }
    let ngens = n - 1;
    let table = todd_coxeter(ngens, &braid.relators, &subgens, limit)?;
    let expected = young.young_index() as usize;
    assert_eq!(
        table.count(),
        expected,
        "coset count must equal the Young index"
    );
    let schreier = reidemeister_schreier(table, &braid.relators);
    let simplified = tietze_simplify(&schreier.presentation);
    let gen_words = simplified
        .surviving
        .iter()
        .map(|&orig| schreier.gen_word(orig))
        .collect();
    let out = Arc::new(MixedBraid {
        n,
        young: young.clone(),
        coset_count: expected,
        fp: simplified.fp,
        schreier,
        ab_images: simplified.ab_images,
        gen_words,
    });
    cache_put(n, young, out.clone());
    Ok(out)
}

pub fn mixed_braid_group(n: usize, young: &SetPartition) -> Result<Arc<MixedBraid>, GroupError> {
    mixed_braid_group_with_limit(n, young, DEFAULT_COSET_LIMIT)
}

type Cache = Mutex<BTreeMap<(usize, Vec<Vec<usize>>), Arc<MixedBraid>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(BTreeMap::new()))
}

fn cache_get(n: usize, young: &SetPartition) -> Option<Arc<MixedBraid>> {
    cache()
        .lock()
        .unwrap()
        .get(&(n, young.blocks.clone()))
        .cloned()
}

fn cache_put(n: usize, young: &SetPartition, value: Arc<MixedBraid>) {
    cache()
        .lock()
        .unwrap()
        .insert((n, young.blocks.clone()), value);
}

/// The map induced on abelianizations by conjugating the mixed braid
/// group with a braid lifting a strand relabeling `λ` (which must carry
/// `src.young` onto `tgt.young`).  Returned with target coordinates in
/// rows: it maps column vectors over `src.fp` generators to column
/// vectors over `tgt.fp` generators.
pub fn braid_ab_transport(
    src: &MixedBraid,
    tgt: &MixedBraid,
    relabel: &[usize],
) -> Result<Matrix<BigInt>, GroupError> {
    let n = src.n;
    assert_eq!(tgt.n, n);
    assert_eq!(relabel.len(), n);
    assert_eq!(
        src.young.relabel(relabel),
        tgt.young,
        "relabeling must carry the source partition onto the target"
    );
    // conjugation x -> w x w^{-1} must carry the source subgroup into the
    // target; try both lifts of the relabeling and keep the one under
    // which every source generator lands in the target subgroup
    let mut inv = vec![0usize; n];
    for (i, &t) in relabel.iter().enumerate() {
        inv[t] = i;
    }
    let candidates = [word_for_perm(relabel), word_for_perm(&inv)];
    let membership_ok = |w: &Word| {
        let w_inv = invert_word(w);
        src.gen_words.iter().all(|u| {
            let mut conj = w.clone();
            conj.extend_from_slice(u);
            conj.extend_from_slice(&w_inv);
            tgt.schreier.rewrite(&free_reduce(&conj)).is_ok()
        })
    };
    let w = candidates
        .iter()
        .find(|w| membership_ok(w))
        .expect("one lift of the relabeling conjugates into the target subgroup")
        .clone();
    let w_inv = invert_word(&w);
    let mut rows = Vec::with_capacity(src.fp.gens.len());
    for u in &src.gen_words {
        let mut conj = w.clone();
        conj.extend_from_slice(u);
        conj.extend_from_slice(&w_inv);
        rows.push(tgt.word_ab(&free_reduce(&conj))?);
    }
    // rows are images of source generators; transpose to act on columns
    let m = Matrix::from_rows(rows);
    Ok(m.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab_of(n: usize, young: &SetPartition) -> H1Result {
        mixed_braid_group(n, young).unwrap().abelianization()
    }

    #[test]
    fn index_two_subgroup_of_b2() {
        let mb = mixed_braid_group(2, &SetPartition::singletons(2)).unwrap();
        assert_eq!(mb.coset_count, 2);
        let h = mb.abelianization();
        assert_eq!((h.rank, h.torsion.as_slice()), (1, &[][..]), "P_2 = Z");
    }

    #[test]
    fn full_block_is_the_whole_braid_group() {
        let mb = mixed_braid_group(3, &SetPartition::single_block(3)).unwrap();
        assert_eq!(mb.coset_count, 1);
        let h = mb.abelianization();
        assert_eq!((h.rank, h.torsion.as_slice()), (1, &[][..]), "B_3 abelianizes to Z");
    }

    #[test]
    fn pure_braid_ranks() {
        for n in 2..=4usize {
            let h = ab_of(n, &SetPartition::singletons(n));
            let expected = n * (n - 1) / 2;
            assert_eq!(h.rank, expected, "P_{} has rank n(n-1)/2", n);
            assert!(h.torsion.is_empty());
        }
    }

    #[test]
    fn coset_counts_match_young_indices_up_to_n4() {
        for n in 2..=4usize {
            for young in crate::oracle::set_partitions(n) {
                let mb = mixed_braid_group(n, &young).unwrap();
                assert_eq!(mb.coset_count as u64, young.young_index());
            }
        }
    }

    #[test]
    fn word_membership_and_ab_coordinates() {
        let mb = mixed_braid_group(2, &SetPartition::singletons(2)).unwrap();
        // P_2 is generated by sigma^2; its ab coordinate is 1
        let v = mb.word_ab(&vec![1, 1]).unwrap();
        assert_eq!(v, vec![BigInt::from(1)]);
        assert!(mb.word_ab(&vec![1]).is_err());
    }

    #[test]
    fn transport_on_two_strands() {
        let young = SetPartition::singletons(2);
        let mb = mixed_braid_group(2, &young).unwrap();
        let id = braid_ab_transport(&mb, &mb, &[0, 1]).unwrap();
        assert!(id.is_identity());
        let swap = braid_ab_transport(&mb, &mb, &[1, 0]).unwrap();
        assert!(swap.is_identity(), "conjugating P_2 by sigma fixes sigma^2");
    }

    #[test]
    fn transport_composes_to_identity() {
        // three strands, blocks {0,1},{2} mapped to {1,2},{0} by λ = (0 1 2)
        let young_a = SetPartition::new(3, vec![vec![0, 1], vec![2]]);
        let relabel = vec![1, 2, 0];
        let young_b = young_a.relabel(&relabel);
        let a = mixed_braid_group(3, &young_a).unwrap();
        let b = mixed_braid_group(3, &young_b).unwrap();
        let fwd = braid_ab_transport(&a, &b, &relabel).unwrap();
        let mut back_relabel = vec![0usize; 3];
        for (i, &t) in relabel.iter().enumerate() {
            back_relabel[t] = i;
        }
        let back = braid_ab_transport(&b, &a, &back_relabel).unwrap();
        assert!(back.mul(&fwd).is_identity(), "inverse relabel composes to the identity on H_1");
    }

    #[test]
    fn band_words_map_to_transpositions() {
        assert_eq!(braid_perm(4, &band_word(0, 3)), vec![3, 1, 2, 0]);
        assert_eq!(braid_perm(4, &pure_gen_word(0, 3)), vec![0, 1, 2, 3]);
    }
}
