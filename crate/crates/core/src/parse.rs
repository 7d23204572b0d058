//! Input language for generic difference polynomial systems.
//!
//! ```text
//! # comment
//! P0 = u + u*y[1,1]^2*y[2,1] + u*y[1,0]^-1
//! P1 = u + u*y[2,0]
//! ```
//!
//! `y[i,k]` is the `k`-th transform of `y_i`. Each bare `u` becomes a fresh
//! coefficient `u[i,j]`, numbered in term order; the first term of each
//! polynomial carries the distinguished coefficient.

use std::fmt;

use thiserror::Error;

use crate::diffpoly::{CoeffRef, DiffPolynomial, DiffTerm, LaurentMonomial, VarRef};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("variable {var} repeated within one term at {line}:{col}")]
    DuplicateVariable { line: usize, col: usize, var: String },
    #[error("term without a generic coefficient at {line}:{col}")]
    NonGenericTerm { line: usize, col: usize },
    #[error("input contains no polynomials")]
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceTerm {
    pub generic: bool,
    pub factors: Vec<(VarRef, i64)>,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourcePoly {
    pub index: usize,
    pub terms: Vec<SourceTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemSource {
    pub polys: Vec<SourcePoly>,
    /// Highest variable index used.
    pub n: usize,
}

impl SystemSource {
    /// The generic difference polynomials `P_i = Σ_j u[i,j]·M_ij`.
    pub fn to_system(&self) -> Result<Vec<DiffPolynomial>, ParseError> {
        self.polys
            .iter()
            .map(|p| {
                let terms = p
                    .terms
                    .iter()
                    .enumerate()
                    .map(|(j, t)| {
                        if !t.generic {
                            return Err(ParseError::NonGenericTerm { line: t.line, col: t.col });
                        }
                        Ok(DiffTerm {
                            coeff: CoeffRef::new(p.index as u32, j as u32, 0),
                            monomial: LaurentMonomial::from_pairs(t.factors.iter().copied()),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(DiffPolynomial::new(terms))
            })
            .collect()
    }
}

impl fmt::Display for SystemSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.polys {
            write!(f, "P{} =", p.index)?;
            for (k, t) in p.terms.iter().enumerate() {
                write!(f, "{}", if k == 0 { " " } else { " + " })?;
                let mut parts: Vec<String> = Vec::new();
                if t.generic {
                    parts.push("u".into());
                }
                for (v, e) in &t.factors {
                    parts.push(if *e == 1 { v.to_string() } else { format!("{v}^{e}") });
                }
                write!(f, "{}", parts.join("*"))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Cursor { chars: src.chars().collect(), pos: 0, line, _src: src }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, col: self.col(), msg: msg.into() }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(self.err(format!("expected '{c}', found '{x}'"))),
            None => Err(self.err(format!("expected '{c}', found end of line"))),
        }
    }

    fn int(&mut self, signed: bool) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if signed && self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
        }
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<i64>().map_err(|_| {
            self.pos = start;
            self.err("expected an integer")
        })
    }
}

pub fn parse_system(text: &str) -> Result<SystemSource, ParseError> {
    let mut polys: Vec<SourcePoly> = Vec::new();
    let mut any_generic = false;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let mut c = Cursor::new(body, line);
        c.expect('P')?;
        let idx_col = c.col();
        let index = c.int(false)?;
        if index as usize != polys.len() {
            return Err(ParseError::Syntax {
                line,
                col: idx_col,
                msg: format!("expected P{}, polynomials must be numbered consecutively from 0", polys.len()),
            });
        }
        c.expect('=')?;
        let mut terms = Vec::new();
        loop {
            let t = parse_term(&mut c)?;
            any_generic |= t.generic;
            terms.push(t);
            match c.peek() {
                None => break,
                Some('+') => c.pos += 1,
                Some(x) => return Err(c.err(format!("unexpected '{x}'"))),
            }
        }
        polys.push(SourcePoly { index: index as usize, terms });
    }
    if polys.is_empty() {
        return Err(ParseError::Empty);
    }
    if any_generic {
        if let Some(t) = polys.iter().flat_map(|p| &p.terms).find(|t| !t.generic) {
            return Err(ParseError::NonGenericTerm { line: t.line, col: t.col });
        }
    }
    let n = polys.iter().flat_map(|p| &p.terms).flat_map(|t| &t.factors).map(|(v, _)| v.var).max().unwrap_or(0);
    Ok(SystemSource { polys, n: n as usize })
}

fn parse_term(c: &mut Cursor) -> Result<SourceTerm, ParseError> {
    c.skip_ws();
    let (line, col) = (c.line, c.col());
    let mut generic = false;
    let mut factors: Vec<(VarRef, i64)> = Vec::new();
    let mut first = true;
    loop {
        let fcol = {
            c.skip_ws();
            c.col()
        };
        match c.peek() {
            Some('u') if first => {
                c.pos += 1;
                generic = true;
            }
            Some('y') => {
                let (v, e) = parse_factor(c)?;
                if factors.iter().any(|(w, _)| *w == v) {
                    return Err(ParseError::DuplicateVariable { line, col: fcol, var: v.to_string() });
                }
                if e != 0 {
                    factors.push((v, e));
                }
            }
            Some(x) => return Err(c.err(format!("expected 'u' or 'y[', found '{x}'"))),
            None => return Err(c.err("expected a term")),
        }
        first = false;
        if c.peek() == Some('*') {
            c.pos += 1;
        } else {
            break;
        }
    }
    Ok(SourceTerm { generic, factors, line, col })
}

fn parse_factor(c: &mut Cursor) -> Result<(VarRef, i64), ParseError> {
    c.expect('y')?;
    c.expect('[')?;
    let vcol = c.col();
    let var = c.int(false)?;
    if var < 1 || var > u32::MAX as i64 {
        return Err(ParseError::Syntax { line: c.line, col: vcol, msg: "variable index must be at least 1".into() });
    }
    c.expect(',')?;
    let shift = c.int(false)?;
    if shift > 1000 {
        return Err(c.err("shift too large"));
    }
    c.expect(']')?;
    let mut e = 1;
    if c.peek() == Some('^') {
        c.pos += 1;
        e = c.int(true)?;
    }
    Ok((VarRef::new(var as u32, shift as u32), e))
}
