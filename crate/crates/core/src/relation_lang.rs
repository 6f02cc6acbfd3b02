//! Text syntax for statements, relations and binomials.
//!
//! ```text
//! statement := set "_||_" set "|" set        set := "e" | digit+
//! relation  := group ("=" group)+            group := "[" statement ("+" statement)* "]"
//! binomial  := product "-" product           product := "[" statement ("*" statement)* "]"
//! ```
//!
//! `e` is the empty set and digits are variable labels `1..=9`. Whitespace is
//! free between tokens. In files, `#` starts a comment running to end of line.

use std::fmt;
use std::path::Path;

use serde::Serialize;

use crate::ci_model::{CIStatement, IndexSet};
use crate::error::{Error, Result};
use crate::imset::Imset;

/// A formal sum of statements (duplicates allowed).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationSide {
    terms: Vec<CIStatement>,
}

impl RelationSide {
    pub fn new(terms: Vec<CIStatement>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::domain("relation side has no terms"));
        }
        Ok(RelationSide { terms })
    }

    pub fn terms(&self) -> &[CIStatement] {
        &self.terms
    }

    pub fn max_var(&self) -> u8 {
        self.terms.iter().map(|s| s.max_var()).max().unwrap_or(0)
    }
}

/// Two or more sides asserted to have equal imsets, optionally naming the
/// non-elementary statement they all represent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CIRelation {
    sides: Vec<RelationSide>,
    target: Option<CIStatement>,
}

impl CIRelation {
    pub fn new(sides: Vec<RelationSide>, target: Option<CIStatement>) -> Result<Self> {
        if sides.len() < 2 {
            return Err(Error::domain("a relation needs at least two sides"));
        }
        if let Some(t) = target {
            if t.is_elementary() {
                return Err(Error::domain(format!("relation target {t} is elementary")));
            }
        }
        Ok(CIRelation { sides, target })
    }

    pub fn sides(&self) -> &[RelationSide] {
        &self.sides
    }

    pub fn target(&self) -> Option<CIStatement> {
        self.target
    }

    /// Largest variable mentioned anywhere in the relation.
    pub fn max_var(&self) -> u8 {
        let t = self.target.map(|t| t.max_var()).unwrap_or(0);
        self.sides.iter().map(|s| s.max_var()).max().unwrap_or(0).max(t)
    }
}

/// `x^plus - x^minus` with statements as variables; both sides sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BinomialExpr {
    plus: Vec<CIStatement>,
    minus: Vec<CIStatement>,
}

impl BinomialExpr {
    pub fn new(mut plus: Vec<CIStatement>, mut minus: Vec<CIStatement>) -> Result<Self> {
        plus.sort();
        minus.sort();
        if plus == minus {
            return Err(Error::domain("binomial is zero"));
        }
        Ok(BinomialExpr { plus, minus })
    }

    pub fn plus(&self) -> &[CIStatement] {
        &self.plus
    }

    pub fn minus(&self) -> &[CIStatement] {
        &self.minus
    }
}

fn join(terms: &[CIStatement], sep: &str) -> String {
    terms.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for RelationSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", join(&self.terms, " + "))
    }
}

impl fmt::Display for CIRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.sides.iter().map(|s| s.to_string()).collect();
        if let Some(t) = self.target {
            parts.push(format!("[{t}]"));
        }
        f.write_str(&parts.join(" = "))
    }
}

impl fmt::Display for BinomialExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] - [{}]", join(&self.plus, " * "), join(&self.minus, " * "))
    }
}

/// Canonical text for the objects of the language.
pub trait Render {
    fn render(&self) -> String;
}

impl Render for CIStatement {
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Render for CIRelation {
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Render for BinomialExpr {
    fn render(&self) -> String {
        self.to_string()
    }
}

/// Imsets render as their JSON subset map.
impl Render for Imset {
    fn render(&self) -> String {
        serde_json::to_string(&self.to_json_map()).expect("map serialization cannot fail")
    }
}

pub fn render<T: Render + ?Sized>(x: &T) -> String {
    x.render()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { src: text.as_bytes(), pos: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected {tok:?}"))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn set(&mut self) -> Result<IndexSet> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'e') {
            self.pos += 1;
            return Ok(IndexSet::EMPTY);
        }
        let mut digits = Vec::new();
        while let Some(&b) = self.src.get(self.pos) {
            if !b.is_ascii_digit() {
                break;
            }
            if b == b'0' {
                return self.err("variable 0 is not allowed (labels are 1..9)");
            }
            digits.push(b - b'0');
            self.pos += 1;
        }
        if digits.is_empty() {
            return self.err("expected a set (digits or 'e')");
        }
        IndexSet::from_indices(&digits)
            .map_err(|e| Error::Parse { offset: start, message: e.to_string() })
    }

    fn statement(&mut self) -> Result<CIStatement> {
        self.skip_ws();
        let start = self.pos;
        let left = self.set()?;
        self.expect("_||_")?;
        let right = self.set()?;
        self.expect("|")?;
        let cond = self.set()?;
        CIStatement::new(left, right, cond)
            .map_err(|e| Error::Parse { offset: start, message: e.to_string() })
    }

    fn group(&mut self, sep: &str) -> Result<Vec<CIStatement>> {
        self.expect("[")?;
        let mut terms = vec![self.statement()?];
        while self.eat(sep) {
            terms.push(self.statement()?);
        }
        self.expect("]")?;
        Ok(terms)
    }

    fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }
}

pub fn parse_statement(text: &str) -> Result<CIStatement> {
    let mut p = Parser::new(text);
    let s = p.statement()?;
    p.finish()?;
    Ok(s)
}

/// Parses a relation. With three or more groups, a final group holding a
/// single non-elementary statement becomes the relation's target.
pub fn parse_relation(text: &str) -> Result<CIRelation> {
    let mut p = Parser::new(text);
    let mut groups = vec![p.group("+")?];
    while p.eat("=") {
        groups.push(p.group("+")?);
    }
    p.finish()?;
    if groups.len() < 2 {
        return Err(Error::Parse { offset: text.len(), message: "a relation needs at least two sides".into() });
    }
    let last = groups.last().unwrap();
    let target = if groups.len() >= 3 && last.len() == 1 && !last[0].is_elementary() {
        let t = last[0];
        groups.pop();
        Some(t)
    } else {
        None
    };
    let sides = groups.into_iter().map(RelationSide::new).collect::<Result<_>>()?;
    CIRelation::new(sides, target)
}

pub fn parse_binomial(text: &str) -> Result<BinomialExpr> {
    let mut p = Parser::new(text);
    let plus = p.group("*")?;
    p.expect("-")?;
    let minus = p.group("*")?;
    p.finish()?;
    BinomialExpr::new(plus, minus)
}

/// Relations read from a file, with 1-based line numbers. Lines that fail to
/// parse are collected rather than aborting the read.
#[derive(Clone, Debug, Default)]
pub struct RelationFile {
    pub relations: Vec<(usize, CIRelation)>,
    pub errors: Vec<(usize, Error)>,
    /// Raw text of every non-comment line, keyed by line number.
    pub lines: Vec<(usize, String)>,
}

pub fn parse_relation_text(text: &str) -> RelationFile {
    let mut out = RelationFile::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        out.lines.push((lineno, line.to_string()));
        match parse_relation(line) {
            Ok(r) => out.relations.push((lineno, r)),
            Err(e) => out.errors.push((lineno, e)),
        }
    }
    out
}

pub fn parse_relation_file(path: impl AsRef<Path>) -> Result<RelationFile> {
    let text = std::fs::read_to_string(path)?;
    Ok(parse_relation_text(&text))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ci_model::{enumerate_elementary, enumerate_structural};

    #[test]
    fn statements() {
        let s = parse_statement("1 _||_ 2 | 3").unwrap();
        assert_eq!((s.left().to_vec(), s.right().to_vec(), s.cond().to_vec()), (vec![1], vec![2], vec![3]));
        let s = parse_statement("23 _||_ 1 | e").unwrap();
        assert_eq!((s.left().to_vec(), s.right().to_vec()), (vec![1], vec![2, 3]));
        assert!(s.cond().is_empty());
        let s = parse_statement("12 _||_ 34 | e").unwrap();
        assert_eq!((s.left().to_vec(), s.right().to_vec()), (vec![1, 2], vec![3, 4]));
        assert_eq!(parse_statement("1_||_2|e").unwrap().render(), "1 _||_ 2 | e");
    }

    #[test]
    fn statement_errors_carry_offsets() {
        match parse_statement("1 _||_ 2 | 2") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("{other:?}"),
        }
        match parse_statement("1 _|_ 2 | e") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_statement("e _||_ 2 | e").is_err());
        assert!(parse_statement("11 _||_ 2 | e").is_err());
        assert!(parse_statement("1 _||_ 2 | e junk").is_err());
        assert!(parse_statement("").is_err());
    }

    #[test]
    fn relations() {
        let r = parse_relation("[1 _||_ 2|3 + 1 _||_ 3|e] = [1 _||_ 3|2 + 1 _||_ 2|e] = [1 _||_ 23|e]").unwrap();
        assert_eq!(r.sides().len(), 2);
        assert_eq!(r.target(), Some(parse_statement("1 _||_ 23 | e").unwrap()));
        let r = parse_relation("[1 _||_ 2|e + 2 _||_ 4|1] = [2 _||_ 4|e + 1 _||_ 2|4] = [14 _||_ 2|e]").unwrap();
        assert_eq!(r.target(), Some(parse_statement("14 _||_ 2 | e").unwrap()));
        assert!(parse_relation("[1 _||_ 2|e]").is_err());
        // two groups: the last is kept as a side
        let r = parse_relation("[1 _||_ 2|3 + 1 _||_ 3|e] = [1 _||_ 23|e]").unwrap();
        assert_eq!(r.sides().len(), 2);
        assert_eq!(r.target(), None);
    }

    #[test]
    fn binomials() {
        let b = parse_binomial("[1 _||_ 2|e * 2 _||_ 4|1] - [2 _||_ 4|e * 1 _||_ 2|4]").unwrap();
        assert_eq!(b.plus().len(), 2);
        assert_eq!(parse_binomial(&b.render()).unwrap(), b);
        assert!(parse_binomial("[1 _||_ 2|e] - [1 _||_ 2|e]").is_err());
    }

    #[test]
    fn render_round_trip_small_n() {
        for n in 2..=4 {
            for s in enumerate_elementary(n).unwrap() {
                assert_eq!(parse_statement(&s.render()).unwrap(), s);
            }
        }
        for n in 3..=4 {
            for (s, _) in enumerate_structural(n).unwrap() {
                assert_eq!(parse_statement(&s.render()).unwrap(), s);
            }
        }
        let r = parse_relation("[2 _||_ 4|13 + 1 _||_ 4|3 + 3 _||_ 4|e] = [3 _||_ 4|12 + 1 _||_ 4|2 + 2 _||_ 4|e] = [123 _||_ 4|e]").unwrap();
        assert_eq!(parse_relation(&r.render()).unwrap(), r);
    }

    #[test]
    fn file_parsing() {
        let f = parse_relation_text("");
        assert!(f.relations.is_empty() && f.errors.is_empty());
        let text = "# header\n\n[1 _||_ 2|3 + 1 _||_ 3|e] = [1 _||_ 3|2 + 1 _||_ 2|e]  # trailing\n[1 _||_ ]\n[1 _||_ 2|e + 1 _||_ 3|2] = [1 _||_ 3|e + 1 _||_ 2|3]\n";
        let f = parse_relation_text(text);
        assert_eq!(f.relations.iter().map(|(l, _)| *l).collect::<Vec<_>>(), vec![3, 5]);
        assert_eq!(f.errors.iter().map(|(l, _)| *l).collect::<Vec<_>>(), vec![4]);
    }

    mod fuzz {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn parser_never_panics(s in "[ e0-9_|\\[\\]+=*-]{0,40}") {
                let _ = parse_statement(&s);
                let _ = parse_relation(&s);
                let _ = parse_binomial(&s);
            }

            #[test]
            fn arbitrary_bytes(s in ".{0,30}") {
                let _ = parse_relation(&s);
            }
        }
    }
}
