//! The knot DSL.
//!
//! ```text
//! knot  := "unknot" | "torus(" int "," int ")" | "hyp(" name ";" "invertible=" bool ")"
//!        | "cable(" int "," int ";" knot ")" | "sum(" knot { "," knot } ")"
//!        | "splice(" kglref ";" knot { "," knot } ")"
//!        | "inverse(" knot ")"
//! kglref := name | "kgl(" name ";" "n=" int ";" "B=" int ";" "rho=" signedcycles [";" "inv=" signedcycles] ")"
//! ```
//!
//! `inverse(k)` denotes the inverse class of `k`; the parser applies the
//! class inversion to the parsed subtree, and the printer uses it for
//! orientation-flipped hyperbolic leaves and formally inverted splice
//! vertices, keeping `parse ∘ print` the identity on valid trees.

use crate::error::ParseError;
use crate::knot::{validate, Catalog, CatalogEntry, KglDatum, KnotTree, Orientation};
use crate::symmetry::invert_class;
use crate::symmetry::signed_perm::{Sign, SignedPerm};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    Comma,
    Semi,
    Eq,
    Plus,
    Minus,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let bump = |c: char, line: &mut usize, col: &mut usize| {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        match c {
            c if c.is_whitespace() => {
                chars.next();
                bump(c, &mut line, &mut col);
            }
            '(' | ')' | ',' | ';' | '=' | '+' | '-' => {
                chars.next();
                bump(c, &mut line, &mut col);
                let tok = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    '=' => Tok::Eq,
                    '+' => Tok::Plus,
                    _ => Tok::Minus,
                };
                out.push(Spanned { tok, line: tline, col: tcol });
            }
            c if c.is_ascii_digit() => {
                let mut v: i64 = 0;
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    v = v
                        .checked_mul(10)
                        .and_then(|v| v.checked_add(d.to_digit(10).unwrap() as i64))
                        .ok_or_else(|| ParseError::syntax(tline, tcol, "integer overflow"))?;
                    chars.next();
                    bump(d, &mut line, &mut col);
                }
                out.push(Spanned { tok: Tok::Int(v), line: tline, col: tcol });
            }
            c if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while let Some(&d) = chars.peek() {
                    if !(d.is_ascii_alphanumeric() || d == '_') {
                        break;
                    }
                    name.push(d);
                    chars.next();
                    bump(d, &mut line, &mut col);
                }
                out.push(Spanned { tok: Tok::Ident(name), line: tline, col: tcol });
            }
            other => {
                return Err(ParseError::syntax(
                    tline,
                    tcol,
                    format!("unexpected character '{}'", other),
                ))
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|s| (s.line, s.col))
            .unwrap_or((1, 1))
    }

    fn err(&self, expected: &str) -> ParseError {
        let (line, col) = self.here();
        let found = match self.peek() {
            Some(Tok::Ident(s)) => format!("`{}`", s),
            Some(Tok::Int(v)) => format!("`{}`", v),
            Some(Tok::LParen) => "`(`".into(),
            Some(Tok::RParen) => "`)`".into(),
            Some(Tok::Comma) => "`,`".into(),
            Some(Tok::Semi) => "`;`".into(),
            Some(Tok::Eq) => "`=`".into(),
            Some(Tok::Plus) => "`+`".into(),
            Some(Tok::Minus) => "`-`".into(),
            None => "end of input".into(),
        };
        ParseError::syntax(line, col, format!("expected {}, found {}", expected, found))
    }

    fn eat(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(expected))
        }
    }

    fn ident(&mut self, expected: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err(expected)),
        }
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == word => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(&format!("`{}`", word))),
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.err("an integer")),
        }
    }

    fn uint(&mut self) -> Result<u64, ParseError> {
        match self.peek() {
            Some(Tok::Int(v)) => {
                let v = *v as u64;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err("a non-negative integer")),
        }
    }

    fn bool(&mut self) -> Result<bool, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "true" => {
                self.pos += 1;
                Ok(true)
            }
            Some(Tok::Ident(s)) if s == "false" => {
                self.pos += 1;
                Ok(false)
            }
            _ => Err(self.err("`true` or `false`")),
        }
    }

    fn knot(&mut self) -> Result<KnotTree, ParseError> {
        let head = self.ident("a knot form (`unknot`, `torus`, `hyp`, `cable`, `sum`, `splice`, `inverse`)")?;
        match head.as_str() {
            "unknot" => Ok(KnotTree::Unknot),
            "torus" => {
                self.eat(Tok::LParen, "`(`")?;
                let p = self.int()?;
                self.eat(Tok::Comma, "`,`")?;
                let q = self.int()?;
                self.eat(Tok::RParen, "`)`")?;
                Ok(KnotTree::torus(p, q))
            }
            "hyp" => {
                self.eat(Tok::LParen, "`(`")?;
                let name = self.ident("a knot name")?;
                self.eat(Tok::Semi, "`;`")?;
                self.keyword("invertible")?;
                self.eat(Tok::Eq, "`=`")?;
                let invertible = self.bool()?;
                self.eat(Tok::RParen, "`)`")?;
                Ok(KnotTree::HypKnot {
                    name,
                    invertible,
                    orientation: Orientation::Plus,
                })
            }
            "cable" => {
                self.eat(Tok::LParen, "`(`")?;
                let p = self.int()?;
                self.eat(Tok::Comma, "`,`")?;
                let q = self.int()?;
                self.eat(Tok::Semi, "`;`")?;
                let companion = self.knot()?;
                self.eat(Tok::RParen, "`)`")?;
                Ok(KnotTree::cable(p, q, companion))
            }
            "sum" => {
                self.eat(Tok::LParen, "`(`")?;
                let mut summands = vec![self.knot()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    summands.push(self.knot()?);
                }
                self.eat(Tok::RParen, "`)`")?;
                Ok(KnotTree::sum(summands))
            }
            "splice" => {
                self.eat(Tok::LParen, "`(`")?;
                let kgl = self.kglref()?;
                self.eat(Tok::Semi, "`;`")?;
                let mut children = vec![self.knot()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    children.push(self.knot()?);
                }
                self.eat(Tok::RParen, "`)`")?;
                Ok(KnotTree::splice(kgl, children))
            }
            "inverse" => {
                self.eat(Tok::LParen, "`(`")?;
                let inner = self.knot()?;
                self.eat(Tok::RParen, "`)`")?;
                Ok(invert_class(&inner))
            }
            other => {
                let (line, col) = self.here();
                Err(ParseError::syntax(
                    line,
                    col.saturating_sub(other.len()),
                    format!("unknown knot form `{}`", other),
                ))
            }
        }
    }

    fn kglref(&mut self) -> Result<KglDatum, ParseError> {
        let name = self.ident("a KGL name or `kgl(...)`")?;
        if name != "kgl" {
            let (line, col) = self.here();
            return Catalog::get_kgl(&name).map_err(|e| {
                ParseError::syntax(line, col.saturating_sub(name.len()), e.to_string())
            });
        }
        self.eat(Tok::LParen, "`(`")?;
        let name = self.ident("a KGL name")?;
        self.eat(Tok::Semi, "`;`")?;
        self.keyword("n")?;
        self.eat(Tok::Eq, "`=`")?;
        let n = self.uint()? as usize;
        self.eat(Tok::Semi, "`;`")?;
        self.keyword("B")?;
        self.eat(Tok::Eq, "`=`")?;
        let b_order = self.uint()?;
        self.eat(Tok::Semi, "`;`")?;
        self.keyword("rho")?;
        self.eat(Tok::Eq, "`=`")?;
        let rho_gen = self.signed_cycles(n)?;
        let inversion = if self.peek() == Some(&Tok::Semi) {
            self.pos += 1;
            self.keyword("inv")?;
            self.eat(Tok::Eq, "`=`")?;
            Some(self.signed_cycles(n)?)
        } else {
            None
        };
        self.eat(Tok::RParen, "`)`")?;
        Ok(KglDatum {
            name,
            n,
            b_order,
            rho_gen,
            inversion,
        })
    }

    fn signed_cycles(&mut self, n: usize) -> Result<SignedPerm, ParseError> {
        let (line, col) = self.here();
        let mut text = String::new();
        if self.peek() != Some(&Tok::LParen) {
            return Err(self.err("`(` starting a signed cycle"));
        }
        while self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            text.push('(');
            let mut first = true;
            loop {
                match self.peek() {
                    Some(Tok::Int(v)) => {
                        if !first {
                            text.push(' ');
                        }
                        text.push_str(&v.to_string());
                        first = false;
                        self.pos += 1;
                    }
                    Some(Tok::Plus) => {
                        text.push_str(" +");
                        self.pos += 1;
                    }
                    Some(Tok::Minus) => {
                        text.push_str(" -");
                        self.pos += 1;
                    }
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        text.push(')');
                        break;
                    }
                    _ => return Err(self.err("a cycle entry, sign, or `)`")),
                }
            }
        }
        SignedPerm::parse_cycles(n, &text)
            .map_err(|e| ParseError::syntax(line, col, e.to_string()))
    }
}

/// Parses the knot DSL.  Syntax errors carry line and column; validation
/// violations beyond the flattening rules are semantic errors.
pub fn parse_knot(src: &str) -> Result<KnotTree, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let tree = p.knot()?;
    if p.pos != p.toks.len() {
        return Err(p.err("end of input"));
    }
    let report = validate(&tree);
    if !report.only_flattening() {
        return Err(ParseError::Semantic(report));
    }
    Ok(tree)
}

/// Canonical text for a tree; `parse_knot ∘ print_knot` is the identity
/// on valid trees.
pub fn print_knot(tree: &KnotTree) -> String {
    match tree {
        KnotTree::Unknot => "unknot".into(),
        KnotTree::Torus { p, q } => format!("torus({},{})", p, q),
        KnotTree::HypKnot {
            name, invertible, orientation,
        } => {
            let plain = format!("hyp({}; invertible={})", name, invertible);
            match orientation {
                Orientation::Plus => plain,
                Orientation::Minus => format!("inverse({})", plain),
            }
        }
        KnotTree::Cable { p, q, companion } => {
            format!("cable({},{}; {})", p, q, print_knot(companion))
        }
        KnotTree::Sum { summands } => format!(
            "sum({})",
            summands.iter().map(print_knot).collect::<Vec<_>>().join(", ")
        ),
        KnotTree::HypSplice {
            kgl, children, inverse_marker,
        } => {
            let body = format!(
                "splice({}; {})",
                print_kglref(kgl),
                children.iter().map(print_knot).collect::<Vec<_>>().join(", ")
            );
            if *inverse_marker {
                format!("inverse({})", body)
            } else {
                body
            }
        }
    }
}

fn print_kglref(kgl: &KglDatum) -> String {
    if let Ok(CatalogEntry::Kgl(known)) = Catalog::get(&kgl.name) {
        if &known == kgl {
            return kgl.name.clone();
        }
    }
    let mut s = format!(
        "kgl({}; n={}; B={}; rho={}",
        kgl.name,
        kgl.n,
        kgl.b_order,
        kgl.rho_gen.cycle_string()
    );
    if let Some(iota) = &kgl.inversion {
        s.push_str(&format!("; inv={}", iota.cycle_string()));
    }
    s.push(')');
    s
}

/// Signed-cycle text round-trip helpers exposed for the CLI.
pub fn parse_signed_perm(n: usize, text: &str) -> Result<SignedPerm, ParseError> {
    SignedPerm::parse_cycles(n, text).map_err(|e| ParseError::syntax(1, 1, e.to_string()))
}

pub fn sign_text(sign: Sign) -> &'static str {
    match sign {
        Sign::Plus => "+",
        Sign::Minus => "-",
    }
}
