//! Parser for the group-description DSL used by the CLI.
//!
//! Grammar (whitespace-insensitive, case-insensitive on C/Z/x):
//!
//! ```text
//! expr := term { "x" term }
//! term := ("C" int | "Z") ["^" int]
//!       | "(" "C" int ":" "C" int "|" int ")"
//!       | "table(" path ")"
//! ```
//!
//! Semidirect and table terms cannot be combined with other factors.

use std::path::Path;

use crate::error::{Error, Result};
use crate::group::{FGAbelianSpec, Group, SemidirectSpec, TableGroup};

/// Abstract syntax of a group expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupExpr {
    /// Cyclic factor C_d, d >= 2.
    Cyclic(u64),
    /// The free factor Z.
    Free,
    /// expr^k, k >= 1. The grammar only produces powers of C and Z terms.
    Power(Box<GroupExpr>, u64),
    /// Direct product of two or more factors.
    Product(Vec<GroupExpr>),
    /// Semidirect product (C_m : C_k | t).
    Semidirect { m: u64, k: u64, t: u64 },
    /// Cayley table loaded from a file.
    Table(String),
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { bytes: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn found_desc(&self) -> String {
        match self.bytes.get(self.pos) {
            None => "end of input".into(),
            Some(&b) => format!("{:?}", b as char),
        }
    }

    fn err(&mut self, expected: &[&str]) -> Error {
        self.skip_ws();
        Error::Syntax {
            offset: self.pos,
            expected: expected.join(" | "),
            found: self.found_desc(),
        }
    }

    fn eat(&mut self, ch: u8, expected: &[&str]) -> Result<()> {
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(expected))
        }
    }

    fn integer(&mut self) -> Result<(u64, usize)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err(&["integer"]));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("digits");
        let value = text.parse().map_err(|_| Error::Semantic {
            offset: start,
            message: format!("integer literal {text} is out of range"),
        })?;
        Ok((value, start))
    }

    fn cyclic_order(&mut self) -> Result<u64> {
        match self.peek() {
            Some(b'c') | Some(b'C') => self.pos += 1,
            _ => return Err(self.err(&["'C'"])),
        }
        let (d, at) = self.integer()?;
        if d < 2 {
            return Err(Error::Semantic {
                offset: at,
                message: format!("cyclic factor C{d} is not a group factor; orders start at 2"),
            });
        }
        Ok(d)
    }

    fn power_suffix(&mut self, base: GroupExpr) -> Result<GroupExpr> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let (k, at) = self.integer()?;
            if k < 1 {
                return Err(Error::Semantic {
                    offset: at,
                    message: "powers must be at least 1".into(),
                });
            }
            Ok(GroupExpr::Power(Box::new(base), k))
        } else {
            Ok(base)
        }
    }

    fn term(&mut self) -> Result<GroupExpr> {
        match self.peek() {
            Some(b'c') | Some(b'C') => {
                let d = self.cyclic_order()?;
                self.power_suffix(GroupExpr::Cyclic(d))
            }
            Some(b'z') | Some(b'Z') => {
                self.pos += 1;
                self.power_suffix(GroupExpr::Free)
            }
            Some(b'(') => {
                self.pos += 1;
                let m = self.cyclic_order()?;
                self.eat(b':', &["':'"])?;
                let k = self.cyclic_order()?;
                self.eat(b'|', &["'|'"])?;
                let (t, at) = self.integer()?;
                if t < 1 {
                    return Err(Error::Semantic {
                        offset: at,
                        message: "action exponent must be at least 1".into(),
                    });
                }
                self.eat(b')', &["')'"])?;
                Ok(GroupExpr::Semidirect { m, k, t })
            }
            Some(b't') | Some(b'T') => {
                let at = self.pos;
                let keyword = b"table(";
                for &want in keyword {
                    match self.bytes.get(self.pos) {
                        Some(&b) if b.eq_ignore_ascii_case(&want) => self.pos += 1,
                        _ => {
                            self.pos = at;
                            return Err(self.err(&["'table('"]));
                        }
                    }
                }
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b')' {
                    self.pos += 1;
                }
                if self.pos == self.bytes.len() {
                    return Err(self.err(&["')'"]));
                }
                let path = std::str::from_utf8(&self.bytes[start..self.pos])
                    .map_err(|_| Error::Semantic {
                        offset: start,
                        message: "table path is not valid UTF-8".into(),
                    })?
                    .trim()
                    .to_string();
                self.pos += 1;
                if path.is_empty() {
                    return Err(Error::Semantic {
                        offset: start,
                        message: "table path is empty".into(),
                    });
                }
                Ok(GroupExpr::Table(path))
            }
            _ => Err(self.err(&["'C'", "'Z'", "'('", "'table('"])),
        }
    }

    fn expr(&mut self) -> Result<GroupExpr> {
        let first_at = self.pos;
        let first = self.term()?;
        let mut factors = vec![first];
        while matches!(self.peek(), Some(b'x') | Some(b'X')) {
            self.pos += 1;
            factors.push(self.term()?);
        }
        if self.peek().is_some() {
            return Err(self.err(&["'x'", "end of input"]));
        }
        if factors.len() > 1 {
            if let Some(bad) = factors
                .iter()
                .find(|f| matches!(f, GroupExpr::Semidirect { .. } | GroupExpr::Table(_)))
            {
                return Err(Error::Semantic {
                    offset: first_at,
                    message: format!(
                        "{} factors cannot appear in direct products",
                        match bad {
                            GroupExpr::Semidirect { .. } => "semidirect",
                            _ => "table",
                        }
                    ),
                });
            }
            Ok(GroupExpr::Product(factors))
        } else {
            Ok(factors.pop().expect("nonempty"))
        }
    }
}

/// Parses the DSL into an AST. Never panics, whatever the input.
pub fn parse(text: &str) -> Result<GroupExpr> {
    Parser::new(text).expr()
}

/// Renders an AST back to canonical DSL text; `parse(render(e))` yields an
/// identical AST for every grammar-producible tree.
pub fn render(expr: &GroupExpr) -> String {
    match expr {
        GroupExpr::Cyclic(d) => format!("C{d}"),
        GroupExpr::Free => "Z".into(),
        GroupExpr::Power(base, k) => format!("{}^{k}", render(base)),
        GroupExpr::Product(fs) => {
            fs.iter().map(render).collect::<Vec<_>>().join(" x ")
        }
        GroupExpr::Semidirect { m, k, t } => format!("(C{m}:C{k}|{t})"),
        GroupExpr::Table(path) => format!("table({path})"),
    }
}

/// Turns an AST into a concrete group handle. Abelian expressions collapse
/// to an [`FGAbelianSpec`]; tables are loaded and validated from disk.
pub fn elaborate(expr: &GroupExpr) -> Result<Group> {
    match expr {
        GroupExpr::Semidirect { m, k, t } => {
            Group::semidirect(SemidirectSpec { m: *m, k: *k, t: *t })
        }
        GroupExpr::Table(path) => {
            let mut table = TableGroup::from_file(Path::new(path))?;
            table.set_source(path.into());
            Ok(Group::Table(table))
        }
        other => {
            let mut free_rank = 0usize;
            let mut torsion = Vec::new();
            collect_abelian(other, 1, &mut free_rank, &mut torsion)?;
            Ok(Group::Abelian(FGAbelianSpec::new(free_rank, torsion)?))
        }
    }
}

fn collect_abelian(
    expr: &GroupExpr,
    mult: u64,
    free_rank: &mut usize,
    torsion: &mut Vec<u64>,
) -> Result<()> {
    match expr {
        GroupExpr::Cyclic(d) => {
            for _ in 0..mult {
                torsion.push(*d);
            }
            Ok(())
        }
        GroupExpr::Free => {
            *free_rank += mult as usize;
            Ok(())
        }
        GroupExpr::Power(base, k) => collect_abelian(base, mult * k, free_rank, torsion),
        GroupExpr::Product(fs) => {
            for f in fs {
                collect_abelian(f, mult, free_rank, torsion)?;
            }
            Ok(())
        }
        GroupExpr::Semidirect { .. } | GroupExpr::Table(_) => Err(Error::Semantic {
            offset: 0,
            message: "semidirect and table factors cannot appear in products".into(),
        }),
    }
}

/// Parse-and-elaborate convenience.
pub fn parse_group(text: &str) -> Result<Group> {
    elaborate(&parse(text)?)
}

/// Renders a group handle as DSL text. Table groups need a source path;
/// the trivial group has no DSL form.
pub fn render_group(group: &Group) -> Result<String> {
    match group {
        Group::Abelian(spec) => {
            let mut parts: Vec<String> =
                spec.torsion().iter().map(|d| format!("C{d}")).collect();
            match spec.free_rank() {
                0 => {}
                1 => parts.push("Z".into()),
                r => parts.push(format!("Z^{r}")),
            }
            if parts.is_empty() {
                return Err(Error::Document(
                    "the trivial group has no spec-string form".into(),
                ));
            }
            Ok(parts.join(" x "))
        }
        Group::Semidirect(g) => Ok(format!("(C{}:C{}|{})", g.m(), g.k(), g.t())),
        Group::Table(t) => match t.source() {
            Some(path) => Ok(format!("table({})", path.display())),
            None => Err(Error::Document(
                "table group has no source path to reference".into(),
            )),
        },
    }
}
