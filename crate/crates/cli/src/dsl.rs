//! Group descriptions.
//!
//! ```text
//! spec    := "perm" INT ":" perm ("," perm)*
//!          | "mat" INT ":" matrix ("," matrix)*
//!          | "semidirect" "(" spec "," spec "," "action" "=" "[" [matrix ("," matrix)*] "]" ")"
//!          | ["builtin"] NAME
//! perm    := "()" | ("(" INT+ ")")+
//! matrix  := "[" row ("," row)* "]"
//! row     := "[" INT ("," INT)* "]"
//! NAME    := S<k> | A<k> | D<2k> | C<k> | C<n>^<k> | Q8 | paper_counterexample
//! ```
//!
//! The normal part of a semidirect product must be `C<n>` or `C<n>^<k>`; the
//! action lists one `k×k` matrix over `Z/n` per generator of the acting part.

use std::fmt;

use msolv_core::constructions::{build_counterexample, semidirect_product};
use msolv_core::fingroup::{builtin, closure, FiniteGroup, GroupElem, Perm, DEFAULT_CAP};
use msolv_core::zmodlin::{RMatrix, ResidueRing};
use thiserror::Error;

pub type Matrix = Vec<Vec<i64>>;
pub type Cycles = Vec<Vec<usize>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Perm { degree: usize, generators: Vec<Cycles> },
    Mat { modulus: u64, generators: Vec<Matrix> },
    Semidirect { normal: Box<GroupSpec>, acting: Box<GroupSpec>, action: Vec<Matrix> },
    Builtin(Builtin),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Symmetric(usize),
    Alternating(usize),
    /// Dihedral group of the given order.
    Dihedral(usize),
    Cyclic(usize),
    /// `C<n>^<k>`
    CyclicPower(usize, usize),
    Quaternion,
    Counterexample,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Error)]
pub enum DslError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("invalid group: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Punct(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Punct(c) => write!(f, "`{c}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut column) = (0, 1, 1);
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let start = (line, column);
        let take = |pred: &dyn Fn(char) -> bool, i: &mut usize| {
            let s = *i;
            while *i < chars.len() && pred(chars[*i]) {
                *i += 1;
            }
            chars[s..*i].iter().collect::<String>()
        };
        let tok = if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let neg = c == '-';
            if neg {
                i += 1;
            }
            let digits = take(&|d: char| d.is_ascii_digit(), &mut i);
            let value: i64 = digits.parse().map_err(|_| ParseError {
                line: start.0,
                column: start.1,
                expected: vec!["an integer that fits in 64 bits".into()],
                found: format!("`{digits}`"),
            })?;
            column += digits.len() + neg as usize;
            Tok::Int(if neg { -value } else { value })
        } else if c.is_ascii_alphabetic() || c == '_' {
            let word = take(&|d: char| d.is_ascii_alphanumeric() || d == '_', &mut i);
            column += word.len();
            Tok::Ident(word)
        } else if "()[],:=^".contains(c) {
            i += 1;
            column += 1;
            Tok::Punct(c)
        } else {
            return Err(ParseError {
                line,
                column,
                expected: vec!["a token".into()],
                found: format!("`{c}`"),
            });
        };
        out.push(Token { tok, line: start.0, column: start.1 });
    }
    out.push(Token { tok: Tok::Eof, line, column });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let t = &self.toks[self.pos];
        ParseError {
            line: t.line,
            column: t.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: t.tok.to_string(),
        }
    }

    fn punct(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Punct(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&[&format!("`{c}`")]))
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(&[&format!("`{kw}`")])),
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        match *self.peek() {
            Tok::Int(v) => {
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.error(&["an integer"])),
        }
    }

    fn natural(&mut self) -> Result<usize, ParseError> {
        match *self.peek() {
            Tok::Int(v) if v >= 0 => {
                self.pos += 1;
                Ok(v as usize)
            }
            _ => Err(self.error(&["a non-negative integer"])),
        }
    }

    fn spec(&mut self) -> Result<GroupSpec, ParseError> {
        let Tok::Ident(word) = self.peek().clone() else {
            return Err(self.error(&["`perm`", "`mat`", "`semidirect`", "`builtin`", "a builtin name"]));
        };
        match word.as_str() {
            "perm" => {
                self.pos += 1;
                let degree = self.natural()?;
                self.punct(':')?;
                let mut generators = vec![self.perm()?];
                while *self.peek() == Tok::Punct(',') && *self.peek2() == Tok::Punct('(') {
                    self.pos += 1;
                    generators.push(self.perm()?);
                }
                Ok(GroupSpec::Perm { degree, generators })
            }
            "mat" => {
                self.pos += 1;
                let modulus = self.natural()? as u64;
                self.punct(':')?;
                let mut generators = vec![self.matrix()?];
                while *self.peek() == Tok::Punct(',') && *self.peek2() == Tok::Punct('[') {
                    self.pos += 1;
                    generators.push(self.matrix()?);
                }
                Ok(GroupSpec::Mat { modulus, generators })
            }
            "semidirect" => {
                self.pos += 1;
                self.punct('(')?;
                let normal = Box::new(self.spec()?);
                self.punct(',')?;
                let acting = Box::new(self.spec()?);
                self.punct(',')?;
                self.keyword("action")?;
                self.punct('=')?;
                self.punct('[')?;
                let mut action = Vec::new();
                if *self.peek() != Tok::Punct(']') {
                    action.push(self.matrix()?);
                    while *self.peek() == Tok::Punct(',') {
                        self.pos += 1;
                        action.push(self.matrix()?);
                    }
                }
                self.punct(']')?;
                self.punct(')')?;
                Ok(GroupSpec::Semidirect { normal, acting, action })
            }
            "builtin" => {
                self.pos += 1;
                match self.peek().clone() {
                    Tok::Ident(name) => self.builtin(&name),
                    _ => Err(self.error(&["a builtin name"])),
                }
            }
            _ => self.builtin(&word),
        }
    }

    fn builtin(&mut self, name: &str) -> Result<GroupSpec, ParseError> {
        let expected = ["S<k>", "A<k>", "D<2k>", "C<k>", "C<n>^<k>", "Q8", "paper_counterexample"];
        let numeric = |prefix: char| -> Option<usize> {
            name.strip_prefix(prefix).filter(|s| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()))?.parse().ok()
        };
        let b = match name {
            "Q8" => Builtin::Quaternion,
            "paper_counterexample" => Builtin::Counterexample,
            _ => {
                if let Some(k) = numeric('S').filter(|&k| k >= 1) {
                    Builtin::Symmetric(k)
                } else if let Some(k) = numeric('A').filter(|&k| k >= 3) {
                    Builtin::Alternating(k)
                } else if let Some(k) = numeric('D').filter(|&k| k >= 4 && k % 2 == 0) {
                    Builtin::Dihedral(k)
                } else if let Some(k) = numeric('C').filter(|&k| k >= 1) {
                    if *self.peek2() == Tok::Punct('^') {
                        self.pos += 2;
                        let e = self.natural()?;
                        if e == 0 {
                            self.pos -= 1;
                            return Err(self.error(&["a positive exponent"]));
                        }
                        self.pos -= 1;
                        Builtin::CyclicPower(k, e)
                    } else {
                        Builtin::Cyclic(k)
                    }
                } else {
                    return Err(self.error(&expected));
                }
            }
        };
        self.pos += 1;
        Ok(GroupSpec::Builtin(b))
    }

    fn perm(&mut self) -> Result<Cycles, ParseError> {
        self.punct('(')?;
        if *self.peek() == Tok::Punct(')') {
            self.pos += 1;
            return Ok(Vec::new());
        }
        let mut cycles = Vec::new();
        loop {
            let mut cycle = vec![self.natural()?];
            while *self.peek() != Tok::Punct(')') {
                cycle.push(self.natural().map_err(|_| self.error(&["a point", "`)`"]))?);
            }
            self.pos += 1;
            cycles.push(cycle);
            if *self.peek() != Tok::Punct('(') {
                return Ok(cycles);
            }
            self.pos += 1;
        }
    }

    fn matrix(&mut self) -> Result<Matrix, ParseError> {
        self.punct('[')?;
        let mut rows = vec![self.row()?];
        while *self.peek() == Tok::Punct(',') {
            self.pos += 1;
            rows.push(self.row()?);
        }
        self.punct(']')?;
        Ok(rows)
    }

    fn row(&mut self) -> Result<Vec<i64>, ParseError> {
        self.punct('[')?;
        let mut row = vec![self.int()?];
        while *self.peek() == Tok::Punct(',') {
            self.pos += 1;
            row.push(self.int()?);
        }
        self.punct(']')?;
        Ok(row)
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(&["end of input"]))
        }
    }
}

pub fn parse_group_dsl(text: &str) -> Result<GroupSpec, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let spec = p.spec()?;
    p.finish()?;
    Ok(spec)
}

fn write_matrix(f: &mut fmt::Formatter<'_>, m: &Matrix) -> fmt::Result {
    write!(f, "[")?;
    for (i, row) in m.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", cells.join(","))?;
    }
    write!(f, "]")
}

fn write_perm(f: &mut fmt::Formatter<'_>, cycles: &Cycles) -> fmt::Result {
    if cycles.is_empty() {
        return write!(f, "()");
    }
    for c in cycles {
        let pts: Vec<String> = c.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", pts.join(" "))?;
    }
    Ok(())
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Symmetric(k) => write!(f, "S{k}"),
            Builtin::Alternating(k) => write!(f, "A{k}"),
            Builtin::Dihedral(k) => write!(f, "D{k}"),
            Builtin::Cyclic(k) => write!(f, "C{k}"),
            Builtin::CyclicPower(n, k) => write!(f, "C{n}^{k}"),
            Builtin::Quaternion => write!(f, "Q8"),
            Builtin::Counterexample => write!(f, "paper_counterexample"),
        }
    }
}

/// Canonical form, accepted back by [`parse_group_dsl`].
impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Perm { degree, generators } => {
                write!(f, "perm {degree} : ")?;
                for (i, g) in generators.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write_perm(f, g)?;
                }
                Ok(())
            }
            GroupSpec::Mat { modulus, generators } => {
                write!(f, "mat {modulus} : ")?;
                for (i, g) in generators.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write_matrix(f, g)?;
                }
                Ok(())
            }
            GroupSpec::Semidirect { normal, acting, action } => {
                write!(f, "semidirect({normal}, {acting}, action=[")?;
                for (i, m) in action.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write_matrix(f, m)?;
                }
                write!(f, "])")
            }
            GroupSpec::Builtin(b) => write!(f, "builtin {b}"),
        }
    }
}

fn invalid(e: impl fmt::Display) -> DslError {
    DslError::Invalid(e.to_string())
}

fn residue_matrix(ring: ResidueRing, m: &Matrix) -> Result<RMatrix, DslError> {
    let cols = m.first().map_or(0, |r| r.len());
    if m.iter().any(|r| r.len() != cols) || m.len() != cols {
        return Err(DslError::Invalid(format!("matrix {m:?} is not square")));
    }
    RMatrix::from_rows(ring, m).map_err(invalid)
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup, DslError> {
        match self {
            GroupSpec::Perm { degree, generators } => {
                let gens: Vec<GroupElem> = generators
                    .iter()
                    .map(|c| Perm::from_cycles(*degree, c).map(GroupElem::Perm))
                    .collect::<Result<_, _>>()
                    .map_err(invalid)?;
                closure(&gens, DEFAULT_CAP).map_err(invalid)
            }
            GroupSpec::Mat { modulus, generators } => {
                let ring = ResidueRing::new(*modulus).map_err(invalid)?;
                let gens: Vec<GroupElem> = generators
                    .iter()
                    .map(|m| GroupElem::matrix(residue_matrix(ring, m)?).map_err(invalid))
                    .collect::<Result<_, _>>()?;
                let dims: Vec<usize> = generators.iter().map(|m| m.len()).collect();
                if dims.windows(2).any(|w| w[0] != w[1]) {
                    return Err(DslError::Invalid("matrix generators differ in size".into()));
                }
                closure(&gens, DEFAULT_CAP).map_err(invalid)
            }
            GroupSpec::Semidirect { normal, acting, action } => {
                let (n, k) = match **normal {
                    GroupSpec::Builtin(Builtin::Cyclic(n)) => (n, 1),
                    GroupSpec::Builtin(Builtin::CyclicPower(n, k)) => (n, k),
                    _ => return Err(DslError::Invalid("normal part must be `C<n>` or `C<n>^<k>`".into())),
                };
                if n < 2 {
                    return Err(DslError::Invalid("normal part must be nontrivial".into()));
                }
                let h = acting.build()?;
                let ring = ResidueRing::new(n as u64).map_err(invalid)?;
                let mats: Vec<RMatrix> = action.iter().map(|m| residue_matrix(ring, m)).collect::<Result<_, _>>()?;
                Ok(semidirect_product(n as u64, k, &h, &mats).map_err(invalid)?.group)
            }
            GroupSpec::Builtin(b) => Ok(match *b {
                Builtin::Symmetric(k) => builtin::symmetric(k),
                Builtin::Alternating(k) => builtin::alternating(k),
                Builtin::Dihedral(k) => builtin::dihedral(k / 2),
                Builtin::Cyclic(k) => builtin::cyclic(k),
                Builtin::CyclicPower(n, k) => builtin::abelian(&vec![n; k]),
                Builtin::Quaternion => builtin::quaternion(),
                Builtin::Counterexample => build_counterexample().map_err(invalid)?.group,
            }),
        }
    }
}

pub fn parse_and_build(text: &str) -> Result<FiniteGroup, DslError> {
    parse_group_dsl(text)?.build()
}

/// Index of an element written as cycles (`(0 1 2)`, `()`) or as a matrix
/// (`[[1,1],[0,1]]`) in a group of the matching kind.
pub fn parse_element(text: &str, g: &FiniteGroup) -> Result<usize, DslError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let reference = g.element(g.identity());
    let elem = match reference {
        GroupElem::Perm(id) => {
            let mut cycles = p.perm()?;
            while *p.peek() == Tok::Punct('(') {
                cycles.extend(p.perm()?);
            }
            p.finish()?;
            GroupElem::Perm(Perm::from_cycles(id.degree(), &cycles).map_err(invalid)?)
        }
        GroupElem::Matrix(id) => {
            let m = p.matrix()?;
            p.finish()?;
            GroupElem::matrix(residue_matrix(id.ring(), &m)?).map_err(invalid)?
        }
    };
    g.index_of(&elem).ok_or_else(|| DslError::Invalid(format!("{text} is not an element of the group")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_documented_forms() {
        let s3 = parse_group_dsl("perm 3 : (0 1 2), (0 1)").unwrap();
        assert_eq!(s3.build().unwrap().order(), 6);
        let m = parse_group_dsl("mat 3 : [[0,2],[1,0]], [[1,0],[0,2]]").unwrap();
        assert_eq!(m.build().unwrap().order(), 8);
        let g = parse_group_dsl("builtin paper_counterexample").unwrap().build().unwrap();
        assert_eq!(g.order(), 72);
        let sd = parse_group_dsl("semidirect(builtin C3^2, builtin D8, action=[[[0,2],[1,0]], [[1,0],[0,2]]])").unwrap();
        let g = sd.build().unwrap();
        assert_eq!(g.order(), 72);
        assert_eq!(g.center().order(), 1);
    }

    #[test]
    fn canonical_print() {
        let s = parse_group_dsl("perm 4:(0 1)(2 3),()").unwrap();
        assert_eq!(s.to_string(), "perm 4 : (0 1)(2 3), ()");
        assert_eq!(parse_group_dsl("C5^3").unwrap().to_string(), "builtin C5^3");
    }

    #[test]
    fn diagnostics_carry_positions() {
        let e = parse_group_dsl("perm 3 :\n  (0 1 2), (0 x)").unwrap_err();
        assert_eq!((e.line, e.column), (2, 15));
        let e = parse_group_dsl("frob").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        assert!(e.expected.iter().any(|s| s == "Q8"));
        let e = parse_group_dsl("mat 3 : [[1,0],[0,1]] extra").unwrap_err();
        assert_eq!(e.expected, vec!["end of input".to_string()]);
    }

    #[test]
    fn elements() {
        let g = parse_and_build("perm 3 : (0 1 2), (0 1)").unwrap();
        let x = parse_element("(0 1 2)", &g).unwrap();
        assert_eq!(g.element_order(x), 3);
        assert_eq!(parse_element("()", &g).unwrap(), g.identity());
        let m = parse_and_build("mat 5 : [[1,1],[0,1]]").unwrap();
        assert_eq!(m.element_order(parse_element("[[1,2],[0,1]]", &m).unwrap()), 5);
        assert!(parse_element("(0 3)", &g).is_err());
    }
}
