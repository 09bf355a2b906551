//! Independent brute-force reference implementations used to validate
//! the group engine.  Nothing here shares reduction code with
//! `group::matrix::snf` or the coset machinery; the duplication is the
//! point.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::GroupError;
use crate::expr::SetPartition;
use crate::group::fp::H1Result;
use crate::group::matrix::Matrix;

/// Relator exponent-sum matrix with a record of the elementary
/// operations applied while reducing it.
pub struct NaiveAbelianization {
    pub matrix: Matrix<BigInt>,
    pub trace: Vec<String>,
}

impl NaiveAbelianization {
    pub fn new(matrix: Matrix<BigInt>) -> NaiveAbelianization {
        NaiveAbelianization {
            matrix,
            trace: Vec::new(),
        }
    }

    /// Invariant factors by exhaustive gcd pivot reduction: only
    /// elementary row/column operations, no unimodular bookkeeping, and a
    /// final pairwise gcd/lcm pass for the divisibility chain.
    pub fn invariant_factors(&mut self) -> Vec<BigInt> {
        let rows = self.matrix.rows();
        let cols = self.matrix.cols();
        let steps = rows.min(cols);
        for t in 0..steps {
            loop {
                // smallest nonzero entry of the working submatrix
                let mut pivot: Option<(usize, usize)> = None;
                for i in t..rows {
                    for j in t..cols {
                        if self.matrix[(i, j)].is_zero() {
                            continue;
                        }
                        let better = match pivot {
                            None => true,
                            Some(p) => self.matrix[(i, j)].abs() < self.matrix[p].abs(),
                        };
                        if better {
                            pivot = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = pivot else {
                    return self.collect_diagonal(t);
                };
                if pi != t {
                    self.trace.push(format!("swap rows {} {}", t, pi));
                    for c in 0..cols {
                        let tmp = self.matrix[(t, c)].clone();
                        self.matrix[(t, c)] = self.matrix[(pi, c)].clone();
                        self.matrix[(pi, c)] = tmp;
                    }
                }
                if pj != t {
                    self.trace.push(format!("swap cols {} {}", t, pj));
                    for r in 0..rows {
                        let tmp = self.matrix[(r, t)].clone();
                        self.matrix[(r, t)] = self.matrix[(r, pj)].clone();
                        self.matrix[(r, pj)] = tmp;
                    }
                }
                let p = self.matrix[(t, t)].clone();
                let mut clean = true;
                for i in t + 1..rows {
                    if self.matrix[(i, t)].is_zero() {
                        continue;
                    }
                    let q = floor_div(&self.matrix[(i, t)], &p);
                    self.trace.push(format!("row {} -= {} * row {}", i, q, t));
                    for c in 0..cols {
                        let v = self.matrix[(i, c)].clone() - q.clone() * self.matrix[(t, c)].clone();
                        self.matrix[(i, c)] = v;
                    }
                    if !self.matrix[(i, t)].is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..cols {
                    if self.matrix[(t, j)].is_zero() {
                        continue;
                    }
                    let q = floor_div(&self.matrix[(t, j)], &p);
                    self.trace.push(format!("col {} -= {} * col {}", j, q, t));
                    for r in 0..rows {
                        let v = self.matrix[(r, j)].clone() - q.clone() * self.matrix[(r, t)].clone();
                        self.matrix[(r, j)] = v;
                    }
                    if !self.matrix[(t, j)].is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }
        }
        self.collect_diagonal(steps)
    }

    fn collect_diagonal(&mut self, upto: usize) -> Vec<BigInt> {
        let mut diag: Vec<BigInt> = (0..upto)
            .map(|i| self.matrix[(i, i)].abs())
            .filter(|d| !d.is_zero())
            .collect();
        // enforce the divisibility chain by pairwise gcd/lcm
        let k = diag.len();
        loop {
            let mut settled = true;
            for i in 0..k {
                for j in i + 1..k {
                    let a = diag[i].clone();
                    let b = diag[j].clone();
                    if (b.clone() % a.clone()).is_zero() {
                        continue;
                    }
                    let g = gcd_big(&a, &b);
                    let l = a.clone() / g.clone() * b.clone();
                    self.trace.push(format!("chain fix d{} d{}", i, j));
                    diag[i] = g;
                    diag[j] = l;
                    settled = false;
                }
            }
            if settled {
                break;
            }
        }
        diag
    }
}

fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = a % b.clone();
        a = b;
        b = r;
    }
    a
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    let q = a / b;
    if (a - &q * b).is_zero() || (a.sign() == b.sign()) {
        q
    } else {
        q - 1
    }
}

/// Invariant factors of an integer matrix, independent of the SNF path.
pub fn naive_invariant_factors(a: &Matrix<BigInt>) -> Vec<BigInt> {
    NaiveAbelianization::new(a.clone()).invariant_factors()
}

/// Coinvariants of a free abelian group under a finite-order
/// endomorphism: `coker(M - Id)` by naive reduction, with a determinant
/// cross-check on the torsion product when `M - Id` is nonsingular.
pub fn coinvariants_bruteforce(m: &Matrix<BigInt>, order: u64) -> Result<H1Result, GroupError> {
    assert!(m.is_square());
    let mut power = Matrix::<BigInt>::identity(m.rows());
    for _ in 0..order {
        power = power.mul(m);
    }
    if !power.is_identity() {
        return Err(GroupError::NotFiniteOrder { claimed: order });
    }
    let delta = m.sub(&Matrix::identity(m.rows()));
    let factors = naive_invariant_factors(&delta);
    let rank = m.rows() - factors.len();
    let torsion: Vec<u64> = factors
        .iter()
        .filter(|d| **d != BigInt::from(1))
        .map(|d| u64::try_from(d).expect("torsion fits in u64"))
        .collect();
    if rank == 0 {
        let det = delta.det().abs();
        let product: BigInt = factors.iter().product();
        assert_eq!(det, product, "torsion order must match |det(M - I)|");
    }
    Ok(H1Result::new(rank, torsion))
}

/// All set partitions of `{0..n}` in a deterministic order.
pub fn set_partitions(n: usize) -> Vec<SetPartition> {
    fn extend(n: usize, i: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<SetPartition>) {
        if i == n {
            out.push(SetPartition::new(n, blocks.clone()));
            return;
        }
        for b in 0..blocks.len() {
            blocks[b].push(i);
            extend(n, i + 1, blocks, out);
            blocks[b].pop();
        }
        blocks.push(vec![i]);
        extend(n, i + 1, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    extend(n, 0, &mut Vec::new(), &mut out);
    out
}

/// Number of left cosets of the Young subgroup `Σ_f` in `Σₙ`, by direct
/// enumeration of all permutations: a coset is determined by the images
/// of the blocks as sets.
pub fn coset_count_check(n: usize, young: &SetPartition, limit: usize) -> Result<usize, GroupError> {
    let total: usize = (1..=n).product();
    if total > limit {
        return Err(GroupError::LimitExceeded { limit });
    }
    let mut cosets: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        let key: Vec<Vec<usize>> = young
            .blocks
            .iter()
            .map(|b| {
                let mut img: Vec<usize> = b.iter().map(|&i| perm[i]).collect();
                img.sort_unstable();
                img
            })
            .collect();
        cosets.insert(key);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(cosets.len())
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Deterministic 64-bit generator for the randomized sweeps; the library
/// itself never draws randomness.
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform draw from `0..bound`.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    /// Uniform draw from `lo..=hi`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }
}

/// A pseudorandom integer matrix with the given bounds.
pub fn random_matrix(rng: &mut SplitMix64, max_dim: usize, max_abs: i64) -> Matrix<BigInt> {
    let rows = 1 + rng.below(max_dim as u64) as usize;
    let cols = 1 + rng.below(max_dim as u64) as usize;
    Matrix::from_fn(rows, cols, |_, _| BigInt::from(rng.range_i64(-max_abs, max_abs)))
}

/// Cross-checks the SNF invariant factors against the naive reduction on
/// `count` pseudorandom matrices; returns the number of mismatches
/// (which must be zero) and panics on any contract violation.
pub fn snf_agreement_sweep(count: usize, max_dim: usize, max_abs: i64, seed: u64) -> usize {
    let mut rng = SplitMix64::new(seed);
    let mut mismatches = 0;
    for _ in 0..count {
        let a = random_matrix(&mut rng, max_dim, max_abs);
        let s = crate::group::matrix::snf(&a);
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d, "U·A·V = D");
        assert_eq!(s.u.det().abs(), BigInt::from(1), "det U = ±1");
        assert_eq!(s.v.det().abs(), BigInt::from(1), "det V = ±1");
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if w[0].is_zero() {
                assert!(w[1].is_zero(), "zeros trail the chain");
            } else {
                assert!((w[1].clone() % w[0].clone()).is_zero(), "divisibility chain");
            }
        }
        if s.invariant_factors() != naive_invariant_factors(&a) {
            mismatches += 1;
        }
    }
    mismatches
}
