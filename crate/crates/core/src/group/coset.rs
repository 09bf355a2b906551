//! Todd-Coxeter coset enumeration (deterministic HLT strategy) and
//! Reidemeister-Schreier rewriting of subgroup presentations.

use std::collections::{BTreeMap, VecDeque};

use crate::error::GroupError;
use crate::group::fp::{free_reduce, FpGroup, Word};

/// Default coset limit for enumerations.
pub const DEFAULT_COSET_LIMIT: usize = 10_000;

const UNDEF: usize = usize::MAX;

fn col(letter: i32) -> usize {
    let g = letter.unsigned_abs() as usize - 1;
    if letter > 0 {
        2 * g
    } else {
        2 * g + 1
    }
}

fn inv_col(c: usize) -> usize {
    c ^ 1
}

struct Enumerator {
    ncols: usize,
    table: Vec<Vec<usize>>,
    rep: Vec<usize>,
    live: usize,
    limit: usize,
}

impl Enumerator {
    fn new(ngens: usize, limit: usize) -> Enumerator {
        let ncols = 2 * ngens;
        Enumerator {
            ncols,
            table: vec![vec![UNDEF; ncols]],
            rep: vec![0],
            live: 1,
            limit,
        }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.rep[a] != a {
            let r = self.rep[self.rep[a]];
            self.rep[a] = r;
            a = r;
        }
        a
    }

    fn is_live(&self, a: usize) -> bool {
        self.rep[a] == a
    }

    fn define(&mut self, a: usize, c: usize) -> Result<usize, GroupError> {
        if self.table.len() >= self.limit {
            return Err(GroupError::IndexTooLarge { limit: self.limit });
        }
        let b = self.table.len();
        self.table.push(vec![UNDEF; self.ncols]);
        self.rep.push(b);
        self.live += 1;
        self.table[a][c] = b;
        self.table[b][inv_col(c)] = a;
        Ok(b)
    }

    fn merge(&mut self, a: usize, b: usize, q: &mut VecDeque<usize>) {
        let a = self.find(a);
        let b = self.find(b);
        if a == b {
            return;
        }
        let (keep, gone) = if a < b { (a, b) } else { (b, a) };
        self.rep[gone] = keep;
        self.live -= 1;
        q.push_back(gone);
    }

    fn coincide(&mut self, a: usize, b: usize) {
        let mut q = VecDeque::new();
        self.merge(a, b, &mut q);
        while let Some(gamma) = q.pop_front() {
            for c in 0..self.ncols {
                let delta = self.table[gamma][c];
                if delta == UNDEF {
                    continue;
                }
                if self.table[delta][inv_col(c)] == gamma {
                    self.table[delta][inv_col(c)] = UNDEF;
                }
                let mu = self.find(gamma);
                let nu = self.find(delta);
                if self.table[mu][c] != UNDEF {
                    let existing = self.table[mu][c];
                    self.merge(nu, existing, &mut q);
                } else if self.table[nu][inv_col(c)] != UNDEF {
                    let existing = self.table[nu][inv_col(c)];
                    self.merge(mu, existing, &mut q);
                } else {
                    self.table[mu][c] = nu;
                    self.table[nu][inv_col(c)] = mu;
                }
            }
        }
    }

    fn set_edge(&mut self, a: usize, c: usize, b: usize) {
        let existing = self.table[a][c];
        if existing != UNDEF {
            if self.find(existing) != self.find(b) {
                self.coincide(existing, b);
            }
            return;
        }
        self.table[a][c] = b;
        let back = self.table[b][inv_col(c)];
        if back == UNDEF {
            self.table[b][inv_col(c)] = a;
        } else if self.find(back) != self.find(a) {
            self.coincide(back, a);
        }
    }

    fn scan_and_fill(&mut self, start: usize, word: &Word) -> Result<(), GroupError> {
        if word.is_empty() {
            return Ok(());
        }
        let mut f = self.find(start);
        let mut b = f;
        let mut i = 0usize;
        let mut j = word.len();
        loop {
            while i < j {
                let c = col(word[i]);
                let next = self.table[f][c];
                if next == UNDEF {
                    break;
                }
                f = self.find(next);
                i += 1;
            }
            if i == j {
                if f != b {
                    self.coincide(f, b);
                }
                return Ok(());
            }
            while j > i {
                let c = inv_col(col(word[j - 1]));
                let next = self.table[b][c];
                if next == UNDEF {
                    break;
                }
                b = self.find(next);
                j -= 1;
            }
            if j == i {
                if f != b {
                    self.coincide(f, b);
                }
                return Ok(());
            }
            if j == i + 1 {
                self.set_edge(f, col(word[i]), b);
                return Ok(());
            }
            let nf = self.define(f, col(word[i]))?;
            f = nf;
            i += 1;
        }
    }
}

/// A complete coset table on live cosets `0..count`, with coset 0 the
/// subgroup itself.
#[derive(Debug, Clone)]
pub struct CosetTable {
    pub ngens: usize,
    table: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn count(&self) -> usize {
        self.table.len()
    }

    pub fn step(&self, coset: usize, letter: i32) -> usize {
        self.table[coset][col(letter)]
    }

    pub fn trace(&self, start: usize, word: &[i32]) -> usize {
        word.iter().fold(start, |c, &x| self.step(c, x))
    }
}

/// Enumerates the cosets of the subgroup generated by `subgens` in the
/// group `⟨ngens | relators⟩`, deterministic HLT strategy.
pub fn todd_coxeter(
    ngens: usize,
    relators: &[Word],
    subgens: &[Word],
    limit: usize,
) -> Result<CosetTable, GroupError> {
    let mut e = Enumerator::new(ngens, limit);
    for w in subgens {
        let w = free_reduce(w);
        e.scan_and_fill(0, &w)?;
    }
    let relators: Vec<Word> = relators.iter().map(|r| free_reduce(r)).collect();
    let mut alpha = 0usize;
    while alpha < e.table.len() {
        if !e.is_live(alpha) {
            alpha += 1;
            continue;
        }
        for r in &relators {
            e.scan_and_fill(alpha, r)?;
            if !e.is_live(alpha) {
                break;
            }
        }
        if e.is_live(alpha) {
            for c in 0..e.ncols {
                if !e.is_live(alpha) {
                    break;
                }
                if e.table[alpha][c] == UNDEF {
                    e.define(alpha, c)?;
                }
            }
        }
        alpha += 1;
    }
    // compact live cosets in discovery order
    let total = e.table.len();
    let mut index = vec![UNDEF; total];
    let mut next = 0usize;
    for a in 0..total {
        if e.is_live(a) {
            index[a] = next;
            next += 1;
        }
    }
    let mut table = vec![vec![UNDEF; e.ncols]; next];
    for a in 0..total {
        if !e.is_live(a) {
            continue;
        }
        for c in 0..e.ncols {
            let t = e.table[a][c];
            assert!(t != UNDEF, "incomplete coset table after enumeration");
            let t = e.find(t);
            table[index[a]][c] = index[t];
        }
    }
    Ok(CosetTable { ngens, table })
}

/// Subgroup presentation data from Reidemeister-Schreier rewriting: a
/// Schreier transversal, one generator per non-tree table edge, and the
/// relators of the supergroup rewritten at every coset.
pub struct SchreierData {
    pub table: CosetTable,
    pub transversal: Vec<Word>,
    /// `(coset, generator)` pairs indexing the Schreier generators.
    pub gen_edges: Vec<(usize, usize)>,
    gen_index: BTreeMap<(usize, usize), usize>,
    pub presentation: FpGroup,
}

impl SchreierData {
    /// The word `t_c · g · t_{c·g}^{-1}` defining a Schreier generator.
    pub fn gen_word(&self, idx: usize) -> Word {
        let (coset, g) = self.gen_edges[idx];
        let mut w = self.transversal[coset].clone();
        w.push(g as i32 + 1);
        let target = self.table.step(coset, g as i32 + 1);
        w.extend(self.transversal[target].iter().rev().map(|&x| -x));
        free_reduce(&w)
    }

    /// Rewrites a word of the supergroup lying in the subgroup (its coset
    /// trace must return to 0) as a word in the Schreier generators.
    pub fn rewrite(&self, word: &Word) -> Result<Word, GroupError> {
        let mut out: Word = Vec::new();
        let mut c = 0usize;
        for &x in word {
            let g = x.unsigned_abs() as usize - 1;
            if x > 0 {
                if let Some(&idx) = self.gen_index.get(&(c, g)) {
                    out.push(idx as i32 + 1);
                }
                c = self.table.step(c, x);
            } else {
                let prev = self.table.step(c, x);
                if let Some(&idx) = self.gen_index.get(&(prev, g)) {
                    out.push(-(idx as i32 + 1));
                }
                c = prev;
            }
        }
        if c != 0 {
            return Err(GroupError::NonConcreteAction(
                "word does not lie in the subgroup".into(),
            ));
        }
        Ok(free_reduce(&out))
    }
}

/// Builds the Reidemeister-Schreier presentation of the subgroup
/// described by a complete coset table.
pub fn reidemeister_schreier(table: CosetTable, relators: &[Word]) -> SchreierData {
    let n = table.count();
    let ncols = 2 * table.ngens;
    // BFS Schreier transversal
    let mut transversal: Vec<Option<Word>> = vec![None; n];
    transversal[0] = Some(Vec::new());
    let mut tree_edges: BTreeMap<(usize, usize), ()> = BTreeMap::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(a) = queue.pop_front() {
        for c in 0..ncols {
            let letter = if c % 2 == 0 {
                (c / 2) as i32 + 1
            } else {
                -((c / 2) as i32 + 1)
            };
            let b = table.trace(a, &[letter]);
            if transversal[b].is_none() {
                let mut w = transversal[a].clone().unwrap();
                w.push(letter);
                transversal[b] = Some(w);
                // mark the undirected g-edge as a tree edge
                let g = c / 2;
                if c % 2 == 0 {
                    tree_edges.insert((a, g), ());
                } else {
                    tree_edges.insert((b, g), ());
                }
                queue.push_back(b);
            }
        }
    }
    let transversal: Vec<Word> = transversal.into_iter().map(Option::unwrap).collect();

    let mut gen_edges = Vec::new();
    let mut gen_index = BTreeMap::new();
    for a in 0..n {
        for g in 0..table.ngens {
            if !tree_edges.contains_key(&(a, g)) {
                gen_index.insert((a, g), gen_edges.len());
                gen_edges.push((a, g));
            }
        }
    }

    let gens: Vec<String> = (0..gen_edges.len()).map(|i| format!("x{}", i + 1)).collect();
    let mut rewritten: Vec<Word> = Vec::new();
    for a in 0..n {
        for r in relators {
            // relator conjugated to the coset: trace starts and ends at a
            let mut c = a;
            let mut out: Word = Vec::new();
            for &x in r {
                let g = x.unsigned_abs() as usize - 1;
                if x > 0 {
                    if let Some(&idx) = gen_index.get(&(c, g)) {
                        out.push(idx as i32 + 1);
                    }
                    c = table.step(c, x);
                } else {
                    let prev = table.step(c, x);
                    if let Some(&idx) = gen_index.get(&(prev, g)) {
                        out.push(-(idx as i32 + 1));
                    }
                    c = prev;
                }
            }
            debug_assert_eq!(c, a, "relator must close up at its coset");
            let out = free_reduce(&out);
            if !out.is_empty() {
                rewritten.push(out);
            }
        }
    }
    rewritten.sort();
    rewritten.dedup();

    SchreierData {
        table,
        transversal,
        gen_edges,
        gen_index,
        presentation: FpGroup {
            gens,
            relators: rewritten,
        },
    }
}
