//! Finitely presented groups, Tietze simplification, and abelianization.
//!
//! Words are sequences of signed 1-based generator indices: `3` is the
//! third generator, `-3` its inverse.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::group::matrix::{snf, Matrix};

pub type Word = Vec<i32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpGroup {
    pub gens: Vec<String>,
    pub relators: Vec<Word>,
}

impl FpGroup {
    pub fn free(gens: Vec<String>) -> FpGroup {
        FpGroup {
            gens,
            relators: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn check(&self) {
        for r in &self.relators {
            for &g in r {
                assert!(
                    g != 0 && g.unsigned_abs() as usize <= self.gens.len(),
                    "relator index out of range"
                );
            }
        }
    }

    /// Exponent-sum matrix: one row per relator, one column per generator.
    pub fn exponent_matrix(&self) -> Matrix<BigInt> {
        let mut m: Matrix<BigInt> = Matrix::zero(self.relators.len(), self.gens.len());
        for (i, r) in self.relators.iter().enumerate() {
            for &g in r {
                let j = g.unsigned_abs() as usize - 1;
                let delta = BigInt::from(g.signum());
                let t = m[(i, j)].clone() + delta;
                m[(i, j)] = t;
            }
        }
        m
    }

    /// `⟨gens | relators⟩` text form.
    pub fn display(&self) -> String {
        let rels = self
            .relators
            .iter()
            .map(|r| word_to_string(r, &self.gens))
            .collect::<Vec<_>>()
            .join(", ");
        format!("< {} | {} >", self.gens.join(", "), rels)
    }
}

pub fn word_to_string(w: &Word, gens: &[String]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let mut out = String::new();
    let mut i = 0;
    while i < w.len() {
        let g = w[i];
        let mut run = 1;
        while i + run < w.len() && w[i + run] == g {
            run += 1;
        }
        if !out.is_empty() {
            out.push(' ');
        }
        let name = &gens[g.unsigned_abs() as usize - 1];
        let exp = if g > 0 { run as i64 } else { -(run as i64) };
        if exp == 1 {
            out.push_str(name);
        } else {
            out.push_str(&format!("{}^{}", name, exp));
        }
        i += run;
    }
    out
}

pub fn free_reduce(w: &Word) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &g in w {
        if g == 0 {
            continue;
        }
        if out.last() == Some(&-g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    out
}

pub fn cyclic_reduce(w: &Word) -> Word {
    let mut w = free_reduce(w);
    while w.len() >= 2 && w[0] == -*w.last().unwrap() {
        w.pop();
        w.remove(0);
    }
    w
}

pub fn invert_word(w: &Word) -> Word {
    w.iter().rev().map(|&g| -g).collect()
}

/// First homology of a finitely presented group: free rank plus the
/// invariant-factor chain of the torsion subgroup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Result {
    pub rank: usize,
    pub torsion: Vec<u64>,
    #[serde(skip)]
    pub basis_tags: Vec<BasisTag>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisTag {
    Meridian,
    Cabling,
    Base,
    Other,
}

impl H1Result {
    pub fn new(rank: usize, torsion: Vec<u64>) -> H1Result {
        let tags = vec![BasisTag::Other; rank];
        H1Result {
            rank,
            torsion,
            basis_tags: tags,
        }
    }

    pub fn free(rank: usize) -> H1Result {
        H1Result::new(rank, Vec::new())
    }
}

impl std::fmt::Display for H1Result {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 {
            parts.push(if self.rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.rank)
            });
        }
        for d in &self.torsion {
            parts.push(format!("Z/{}", d));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Abelianization via the Smith normal form of the exponent-sum matrix.
pub fn abelianization(g: &FpGroup) -> H1Result {
    g.check();
    let m = g.exponent_matrix();
    let s = snf(&m);
    let diag = s.diagonal();
    let occupied = diag.iter().filter(|d| !d.is_zero()).count();
    let torsion: Vec<u64> = diag
        .iter()
        .filter(|d| !d.is_zero() && **d != BigInt::from(1))
        .map(|d| u64::try_from(d).expect("torsion fits in u64"))
        .collect();
    H1Result::new(g.gens.len() - occupied, torsion)
}

/// Tietze simplification: free/cyclic reduction, removal of trivial
/// relators, and elimination of generators defined by short relators.
/// Returns the simplified presentation together with, for each original
/// generator, its abelianized image in the surviving generators.
pub struct Simplified {
    pub fp: FpGroup,
    /// Row `i`: abelianized image of original generator `i+1` over the
    /// surviving generators.
    pub ab_images: Matrix<BigInt>,
    /// Original indices of the surviving generators.
    pub surviving: Vec<usize>,
}

pub fn tietze_simplify(fp: &FpGroup) -> Simplified {
    let n = fp.gens.len();
    // live generators, current relators, and ab images over *original*
    // generator coordinates; compacted at the end
    let mut live: Vec<bool> = vec![true; n];
    let mut relators: Vec<Word> = fp
        .relators
        .iter()
        .map(|r| cyclic_reduce(r))
        .filter(|r| !r.is_empty())
        .collect();
    // ab_subst[g] = abelianized expression of original gen g+1 over
    // current generator indices (1-based)
    let mut ab_subst: Vec<Vec<(usize, BigInt)>> = (0..n).map(|g| vec![(g, BigInt::from(1))]).collect();

    loop {
        relators = relators
            .iter()
            .map(|r| cyclic_reduce(r))
            .filter(|r| !r.is_empty())
            .collect();
        relators.sort();
        relators.dedup();

        // find an elimination: a relator where some generator occurs
        // exactly once, preferring short relators and small generators
        let mut choice: Option<(usize, usize, usize)> = None; // (rel idx, pos, len)
        for (ri, r) in relators.iter().enumerate() {
            if r.len() > ELIM_LEN_BUDGET {
                continue;
            }
            for (pos, &g) in r.iter().enumerate() {
                let occurs = r
                    .iter()
                    .filter(|&&h| h.unsigned_abs() == g.unsigned_abs())
                    .count();
                if occurs == 1 {
                    let better = match choice {
                        None => true,
                        Some((_, _, len)) => r.len() < len,
                    };
                    if better {
                        choice = Some((ri, pos, r.len()));
                    }
                    break;
                }
            }
        }

        let Some((ri, pos, _)) = choice else { break };
        let r = relators[ri].clone();
        let g = r[pos];
        let gen_idx = g.unsigned_abs() as usize - 1;
        // r = u g v  cyclically, so g = u^{-1} v^{-1}
        let mut rest: Word = Vec::new();
        rest.extend_from_slice(&r[pos + 1..]);
        rest.extend_from_slice(&r[..pos]);
        // g * rest = 1  =>  g = rest^{-1}
        let mut replacement = invert_word(&rest);
        if g < 0 {
            replacement = invert_word(&replacement);
        }
        // substitute into every relator
        relators.remove(ri);
        let target = gen_idx as i32 + 1;
        for rel in &mut relators {
            let mut out: Word = Vec::new();
            for &h in rel.iter() {
                if h == target {
                    out.extend_from_slice(&replacement);
                } else if h == -target {
                    out.extend(invert_word(&replacement));
                } else {
                    out.push(h);
                }
            }
            *rel = free_reduce(&out);
        }
        // update abelianized substitutions: e_g := ab(replacement)
        let mut repl_ab: Vec<(usize, BigInt)> = Vec::new();
        for &h in &replacement {
            let idx = h.unsigned_abs() as usize - 1;
            add_term(&mut repl_ab, idx, BigInt::from(h.signum()));
        }
        for subst in ab_subst.iter_mut() {
            let coef = subst
                .iter()
                .find(|(i, _)| *i == gen_idx)
                .map(|(_, c)| c.clone());
            if let Some(c) = coef {
                subst.retain(|(i, _)| *i != gen_idx);
                for (i, rc) in &repl_ab {
                    add_term(subst, *i, c.clone() * rc.clone());
                }
            }
        }
        live[gen_idx] = false;
    }

    // compact surviving generators
    let mut new_index = vec![0usize; n];
    let mut gens = Vec::new();
    let mut surviving = Vec::new();
    for g in 0..n {
        if live[g] {
            new_index[g] = gens.len();
            gens.push(fp.gens[g].clone());
            surviving.push(g);
        }
    }
    let relators = relators
        .iter()
        .map(|r| {
            r.iter()
                .map(|&h| {
                    let idx = h.unsigned_abs() as usize - 1;
                    debug_assert!(live[idx], "relator references an eliminated generator");
                    let ni = new_index[idx] as i32 + 1;
                    if h > 0 {
                        ni
                    } else {
                        -ni
                    }
                })
                .collect()
        })
        .collect();
    let mut ab_images: Matrix<BigInt> = Matrix::zero(n, gens.len());
    for g in 0..n {
        for (i, c) in &ab_subst[g] {
            debug_assert!(live[*i]);
            let t = ab_images[(g, new_index[*i])].clone() + c.clone();
            ab_images[(g, new_index[*i])] = t;
        }
    }
    Simplified {
        fp: FpGroup { gens, relators },
        ab_images,
        surviving,
    }
}

const ELIM_LEN_BUDGET: usize = 24;

fn add_term(terms: &mut Vec<(usize, BigInt)>, idx: usize, c: BigInt) {
    match terms.iter_mut().find(|(i, _)| *i == idx) {
        Some((_, acc)) => {
            *acc = acc.clone() + c;
            if acc.is_zero() {
                terms.retain(|(_, x)| !x.is_zero());
            }
        }
        None => terms.push((idx, c)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn braid3() -> FpGroup {
        FpGroup {
            gens: vec!["s1".into(), "s2".into()],
            relators: vec![vec![1, 2, 1, -2, -1, -2]],
        }
    }

    #[test]
    fn free_group_abelianization() {
        let f = FpGroup::free(vec!["a".into(), "b".into()]);
        let h = abelianization(&f);
        assert_eq!((h.rank, h.torsion.as_slice()), (2, &[][..]));
    }

    #[test]
    fn cyclic_of_order_two() {
        let g = FpGroup {
            gens: vec!["a".into()],
            relators: vec![vec![1, 1]],
        };
        let h = abelianization(&g);
        assert_eq!((h.rank, h.torsion.as_slice()), (0, &[2u64][..]));
    }

    #[test]
    fn braid_groups_abelianize_to_z() {
        let h = abelianization(&braid3());
        assert_eq!((h.rank, h.torsion.as_slice()), (1, &[][..]));

        // B4: sigma1..sigma3, braid + commuting relators
        let b4 = FpGroup {
            gens: vec!["s1".into(), "s2".into(), "s3".into()],
            relators: vec![
                vec![1, 2, 1, -2, -1, -2],
                vec![2, 3, 2, -3, -2, -3],
                vec![1, 3, -1, -3],
            ],
        };
        let h = abelianization(&b4);
        assert_eq!((h.rank, h.torsion.as_slice()), (1, &[][..]));
    }

    #[test]
    fn tietze_preserves_abelianization() {
        // <a, b, c | c = ab, b^2 c = 1> collapses to one generator
        let g = FpGroup {
            gens: vec!["a".into(), "b".into(), "c".into()],
            relators: vec![vec![1, 2, -3], vec![2, 2, 3]],
        };
        let before = abelianization(&g);
        let s = tietze_simplify(&g);
        let after = abelianization(&s.fp);
        assert_eq!((before.rank, before.torsion), (after.rank, after.torsion));
        assert!(s.fp.gens.len() <= 1);
    }

    #[test]
    fn tietze_tracks_ab_images() {
        // <a, b | b a^2> : b = a^{-2}
        let g = FpGroup {
            gens: vec!["a".into(), "b".into()],
            relators: vec![vec![2, 1, 1]],
        };
        let s = tietze_simplify(&g);
        assert_eq!(s.fp.gens, vec!["a".to_string()]);
        assert_eq!(s.ab_images[(0, 0)], BigInt::from(1), "a maps to a");
        assert_eq!(s.ab_images[(1, 0)], BigInt::from(-2), "b maps to a^-2");
    }

    #[test]
    fn word_rendering() {
        let gens = vec!["a".to_string(), "b".to_string()];
        assert_eq!(word_to_string(&vec![1, 1, -2], &gens), "a^2 b^-1");
        assert_eq!(word_to_string(&vec![], &gens), "1");
    }
}
