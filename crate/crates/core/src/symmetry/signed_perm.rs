//! Arithmetic in the signed symmetric group Σₙ⁺ = {±1}ⁿ ⋊ Σₙ.
//!
//! Elements are stored as a bijection `perm` on `{0..n}` together with a
//! sign vector indexed by the *target* slot: applying `g` moves slot `i`
//! to slot `perm[i]`, picking up `signs[perm[i]]`.  With that convention
//! the monomial matrix of `g` has `M[perm[i]][i] = signs[perm[i]]` and
//! composition is matrix multiplication, so `compose(a, b)` applies `b`
//! first.

use std::fmt;

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::GroupError;
use crate::group::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn mul(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn unit(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

/// An element of the signed symmetric group on `n` letters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedPerm {
    perm: Vec<usize>,
    signs: Vec<Sign>,
}

impl SignedPerm {
    pub fn identity(n: usize) -> SignedPerm {
        SignedPerm {
            perm: (0..n).collect(),
            signs: vec![Sign::Plus; n],
        }
    }

    /// Builds an element from an explicit target map and target-slot signs.
    pub fn new(perm: Vec<usize>, signs: Vec<Sign>) -> Result<SignedPerm, GroupError> {
        let n = perm.len();
        if signs.len() != n {
            return Err(GroupError::SizeMismatch {
                expected: n,
                got: signs.len(),
            });
        }
        let mut seen = vec![false; n];
        for &t in &perm {
            if t >= n || seen[t] {
                return Err(GroupError::NotABijection);
            }
            seen[t] = true;
        }
        Ok(SignedPerm { perm, signs })
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    /// Target slot of `i` (0-based).
    pub fn target(&self, i: usize) -> usize {
        self.perm[i]
    }

    /// Sign attached to target slot `j` (0-based).
    pub fn sign_at_target(&self, j: usize) -> Sign {
        self.signs[j]
    }

    /// Sign picked up by the content of source slot `i`.
    pub fn sign_from_source(&self, i: usize) -> Sign {
        self.signs[self.perm[i]]
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &t)| i == t)
            && self.signs.iter().all(|&s| s == Sign::Plus)
    }

    /// `self ∘ other`: apply `other` first, matching `M(self) · M(other)`.
    pub fn compose(&self, other: &SignedPerm) -> Result<SignedPerm, GroupError> {
        let n = self.n();
        if other.n() != n {
            return Err(GroupError::SizeMismatch {
                expected: n,
                got: other.n(),
            });
        }
        let mut perm = vec![0usize; n];
        let mut signs = vec![Sign::Plus; n];
        for i in 0..n {
            let mid = other.perm[i];
            let end = self.perm[mid];
            perm[i] = end;
            signs[end] = other.signs[mid].mul(self.signs[end]);
        }
        Ok(SignedPerm { perm, signs })
    }

    pub fn inverse(&self) -> SignedPerm {
        let n = self.n();
        let mut perm = vec![0usize; n];
        let mut signs = vec![Sign::Plus; n];
        for i in 0..n {
            let t = self.perm[i];
            perm[t] = i;
            signs[i] = self.signs[t];
        }
        SignedPerm { perm, signs }
    }

    pub fn pow(&self, k: u64) -> SignedPerm {
        let mut acc = SignedPerm::identity(self.n());
        for _ in 0..k {
            acc = self.compose(&acc).expect("equal sizes");
        }
        acc
    }

    /// Least `t ≥ 1` with `self^t` the identity, computed from the cycle
    /// structure: a cycle of length `k` contributes `k` when the product
    /// of its signs is `+` and `2k` otherwise.
    pub fn order(&self) -> u64 {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut ord = 1u64;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut sign = Sign::Plus;
            let mut i = start;
            loop {
                seen[i] = true;
                len += 1;
                sign = sign.mul(self.signs[self.perm[i]]);
                i = self.perm[i];
                if i == start {
                    break;
                }
            }
            let cyc = if sign == Sign::Plus { len } else { 2 * len };
            ord = num_integer::lcm(ord, cyc);
        }
        ord
    }

    /// The monomial matrix of the element.
    pub fn matrix(&self) -> Matrix<BigInt> {
        let n = self.n();
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            let t = self.perm[i];
            m[(t, i)] = BigInt::from(self.signs[t].unit());
        }
        m
    }

    /// Parses the signed-cycle notation `(a₁ a₂ … a_k ±)`, with
    /// juxtaposed cycles composing right-to-left and an omitted sign
    /// meaning `+`.  Entries are 1-based and unmentioned letters are
    /// fixed with sign `+`.
    pub fn parse_cycles(n: usize, text: &str) -> Result<SignedPerm, GroupError> {
        let cycles = lex_cycles(text)?;
        if cycles.is_empty() {
            return Err(GroupError::BadCycleNotation(
                "expected at least one cycle".into(),
            ));
        }
        let mut acc = SignedPerm::identity(n);
        // right-to-left: the rightmost cycle acts first
        for (entries, sign) in cycles.iter().rev() {
            let mut perm: Vec<usize> = (0..n).collect();
            let mut signs = vec![Sign::Plus; n];
            let mut used = vec![false; n];
            for &e in entries {
                if e == 0 || e > n {
                    return Err(GroupError::BadCycleNotation(format!(
                        "letter {} out of range 1..={}",
                        e, n
                    )));
                }
                if used[e - 1] {
                    return Err(GroupError::BadCycleNotation(format!(
                        "letter {} repeated in cycle",
                        e
                    )));
                }
                used[e - 1] = true;
            }
            for w in 0..entries.len() {
                let a = entries[w] - 1;
                let b = entries[(w + 1) % entries.len()] - 1;
                perm[a] = b;
                if w + 1 == entries.len() {
                    signs[b] = *sign;
                }
            }
            let cyc = SignedPerm { perm, signs };
            acc = cyc.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Renders the element in signed-cycle notation.  Cycles whose signs
    /// are concentrated at a single step print in the pure form of the
    /// notation; other sign patterns are factored as `(j -)` letters
    /// followed by the unsigned cycle.
    pub fn cycle_string(&self) -> String {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut sign_cycles: Vec<String> = Vec::new();
        let mut perm_cycles: Vec<String> = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut members = Vec::new();
            let mut i = start;
            loop {
                seen[i] = true;
                members.push(i);
                i = self.perm[i];
                if i == start {
                    break;
                }
            }
            let minus: Vec<usize> = members
                .iter()
                .copied()
                .filter(|&j| self.signs[j] == Sign::Minus)
                .collect();
            if members.len() == 1 {
                let j = members[0];
                match self.signs[j] {
                    Sign::Plus => {}
                    Sign::Minus => perm_cycles.push(format!("({} -)", j + 1)),
                }
                continue;
            }
            if minus.is_empty() {
                perm_cycles.push(render_cycle(&cycle_from(self, members[0]), None));
            } else if minus.len() == 1 {
                // start the cycle at the unique minus target so the flip
                // sits on the wrap-around step
                perm_cycles.push(render_cycle(&cycle_from(self, minus[0]), Some(Sign::Minus)));
            } else {
                for &j in &minus {
                    sign_cycles.push(format!("({} -)", j + 1));
                }
                perm_cycles.push(render_cycle(&cycle_from(self, members[0]), None));
            }
        }
        let mut out = String::new();
        for c in sign_cycles.into_iter().chain(perm_cycles) {
            out.push_str(&c);
        }
        if out.is_empty() {
            out.push_str("(1)");
        }
        out
    }

    /// Action on an indexed tuple: entry `i` moves to slot `target(i)`,
    /// transformed by `f` when the step carries a minus sign.
    pub fn act_on<T: Clone>(&self, items: &[T], f: impl Fn(&T) -> T) -> Vec<T> {
        assert_eq!(items.len(), self.n(), "tuple length must equal n");
        let mut out: Vec<Option<T>> = vec![None; self.n()];
        for (i, item) in items.iter().enumerate() {
            let t = self.perm[i];
            let moved = match self.signs[t] {
                Sign::Plus => item.clone(),
                Sign::Minus => f(item),
            };
            out[t] = Some(moved);
        }
        out.into_iter().map(|x| x.expect("bijection")).collect()
    }
}

fn cycle_from(sp: &SignedPerm, start: usize) -> Vec<usize> {
    let mut members = Vec::new();
    let mut i = start;
    loop {
        members.push(i);
        i = sp.perm[i];
        if i == start {
            break;
        }
    }
    members
}

fn render_cycle(members: &[usize], sign: Option<Sign>) -> String {
    let body = members
        .iter()
        .map(|&j| (j + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ");
    match sign {
        Some(Sign::Minus) => format!("({} -)", body),
        _ => format!("({})", body),
    }
}

fn lex_cycles(text: &str) -> Result<Vec<(Vec<usize>, Sign)>, GroupError> {
    let mut cycles = Vec::new();
    let mut chars = text.chars().peekable();
    loop {
        while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
            chars.next();
        }
        match chars.peek() {
            None => break,
            Some('(') => {
                chars.next();
            }
            Some(c) => {
                return Err(GroupError::BadCycleNotation(format!(
                    "expected '(' but found '{}'",
                    c
                )))
            }
        }
        let mut entries = Vec::new();
        let mut sign = Sign::Plus;
        loop {
            while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
                chars.next();
            }
            match chars.peek() {
                Some(')') => {
                    chars.next();
                    break;
                }
                Some('+') => {
                    chars.next();
                    sign = Sign::Plus;
                }
                Some('-') => {
                    chars.next();
                    sign = Sign::Minus;
                }
                Some(c) if c.is_ascii_digit() => {
                    let mut v = 0usize;
                    while matches!(chars.peek(), Some(c) if c.is_ascii_digit()) {
                        v = v * 10 + chars.next().unwrap().to_digit(10).unwrap() as usize;
                    }
                    entries.push(v);
                }
                Some(c) => {
                    return Err(GroupError::BadCycleNotation(format!(
                        "unexpected '{}' in cycle",
                        c
                    )))
                }
                None => {
                    return Err(GroupError::BadCycleNotation(
                        "unterminated cycle".into(),
                    ))
                }
            }
        }
        if entries.is_empty() {
            return Err(GroupError::BadCycleNotation("empty cycle".into()));
        }
        cycles.push((entries, sign));
    }
    Ok(cycles)
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

impl Serialize for SignedPerm {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            n: usize,
            cycles: String,
        }
        Repr {
            n: self.n(),
            cycles: self.cycle_string(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SignedPerm {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n: usize,
            cycles: String,
        }
        let r = Repr::deserialize(de)?;
        SignedPerm::parse_cycles(r.n, &r.cycles).map_err(D::Error::custom)
    }
}
