//! The textual element grammar shared by the library and the CLI, with a
//! renderer that round-trips through the parser:
//!
//! ```text
//! elem   := ['+'|'-'] term (('+'|'-') term)* ;
//! term   := [INT '*'] basis ;
//! basis  := 'D' '(' INT ';' [part (',' part)*] ')' ;   // first INT is n
//! part   := word ['^' INT] ;
//! word   := letter ('.' letter)* | '1' ;  letter := 'x' INT ;
//! ```
//!
//! Free-algebra elements use the same shape with words in place of basis
//! elements. Parts on the word 1 are absorbed by the implicit divided
//! power of 1; repeated words in a part list merge with their multinomial
//! coefficient. Parse errors carry line and column.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::MultiPoly;
use crate::gamma::{FreeElem, GammaBasisElem, GammaElem};
use crate::words::Word;

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Int(BigInt),
    Sym(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err_at(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => {
                chars.next();
                col += 1;
            }
            '0'..='9' => {
                let (l, co) = (line, col);
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let value: BigInt = digits.parse().expect("digits");
                out.push(Spanned {
                    tok: Tok::Int(value),
                    line: l,
                    col: co,
                });
            }
            'D' | 'x' | '(' | ')' | ';' | ',' | '^' | '*' | '+' | '-' | '.' => {
                out.push(Spanned {
                    tok: Tok::Sym(c),
                    line,
                    col,
                });
                chars.next();
                col += 1;
            }
            other => return Err(err_at(line, col, format!("unexpected character {other:?}"))),
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char, what: &str) -> Result<()> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(())
        } else {
            Err(err_at(t.line, t.col, format!("expected {what}")))
        }
    }

    fn expect_int(&mut self, what: &str) -> Result<(BigInt, usize, usize)> {
        let t = self.next();
        match t.tok {
            Tok::Int(v) => Ok((v, t.line, t.col)),
            _ => Err(err_at(t.line, t.col, format!("expected {what}"))),
        }
    }

    fn expect_eof(&mut self) -> Result<()> {
        let t = self.peek();
        if t.tok == Tok::Eof {
            Ok(())
        } else {
            Err(err_at(t.line, t.col, "expected end of input"))
        }
    }

    fn small(&self, v: &BigInt, line: usize, col: usize, what: &str) -> Result<usize> {
        use num_traits::ToPrimitive;
        v.to_usize()
            .ok_or_else(|| err_at(line, col, format!("{what} out of range")))
    }

    /// word := 'x' INT ('.' 'x' INT)* | '1'
    fn parse_word(&mut self, m: u8) -> Result<Word> {
        if let Tok::Int(v) = &self.peek().tok {
            let t = self.peek().clone();
            if v.is_one() {
                self.next();
                return Ok(Word::empty());
            }
            return Err(err_at(t.line, t.col, "expected a word (x<i> or 1)"));
        }
        let mut letters = Vec::new();
        loop {
            self.expect_sym('x', "a letter x<i>")?;
            let (v, line, col) = self.expect_int("a letter index")?;
            let idx = self.small(&v, line, col, "letter index")?;
            if idx < 1 || idx > 255 {
                return Err(err_at(line, col, format!("letter index {idx} out of range")));
            }
            if idx > m as usize {
                return Err(err_at(
                    line,
                    col,
                    format!("letter index {idx} exceeds alphabet size {m}"),
                ));
            }
            letters.push(idx as u8);
            if !self.eat_sym('.') {
                break;
            }
        }
        Ok(Word::from_letters(&letters))
    }

    /// part := word ['^' INT]
    fn parse_part(&mut self, m: u8) -> Result<(Word, u32)> {
        let word = self.parse_word(m)?;
        let mult = if self.eat_sym('^') {
            let (v, line, col) = self.expect_int("a multiplicity")?;
            let raw = self.small(&v, line, col, "multiplicity")?;
            if raw < 1 {
                return Err(err_at(line, col, "multiplicity must be at least 1"));
            }
            raw as u32
        } else {
            1
        };
        Ok((word, mult))
    }

    /// basis := 'D' '(' INT ';' [part (',' part)*] ')'
    fn parse_basis(&mut self, n: usize, m: u8) -> Result<GammaElem> {
        self.expect_sym('D', "a basis element D(n; ...)")?;
        self.expect_sym('(', "'('")?;
        let (v, nline, ncol) = self.expect_int("the degree n")?;
        let declared = self.small(&v, nline, ncol, "degree")?;
        if declared != n {
            return Err(err_at(
                nline,
                ncol,
                format!("element degree {declared} does not match n = {n}"),
            ));
        }
        self.expect_sym(';', "';'")?;
        let mut raw: Vec<(Word, u32)> = Vec::new();
        if self.peek().tok != Tok::Sym(')') {
            loop {
                let at = self.peek().clone();
                let part = self.parse_part(m)?;
                raw.push(part);
                let weight: usize = raw.iter().map(|&(_, k)| k as usize).sum();
                if weight > n {
                    return Err(err_at(
                        at.line,
                        at.col,
                        format!("part weight {weight} exceeds n = {n}"),
                    ));
                }
                if !self.eat_sym(',') {
                    break;
                }
            }
        }
        self.expect_sym(')', "')' or ','")?;
        // parts on the empty word name a piece of the implicit power of 1
        let positive: Vec<(Word, u32)> =
            raw.into_iter().filter(|(w, _)| !w.is_empty()).collect();
        Ok(GammaElem::merge_parts(n, &positive))
    }
}

/// Parses the element grammar; every basis literal must declare degree n
/// and all letters must fit in the m-letter alphabet.
pub fn parse_element(src: &str, n: usize, m: u8) -> Result<GammaElem> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let mut out = GammaElem::zero(n);
    let mut negative = if p.eat_sym('-') {
        true
    } else {
        p.eat_sym('+');
        false
    };
    loop {
        let coeff = if matches!(p.peek().tok, Tok::Int(_)) {
            let (v, _, _) = p.expect_int("a coefficient")?;
            p.expect_sym('*', "'*'")?;
            v
        } else {
            BigInt::one()
        };
        let coeff = if negative { -coeff } else { coeff };
        let basis = p.parse_basis(n, m)?;
        out = out.add(&basis.scale(&coeff));
        if p.eat_sym('+') {
            negative = false;
        } else if p.eat_sym('-') {
            negative = true;
        } else {
            break;
        }
    }
    p.expect_eof()?;
    Ok(out)
}

/// Parses an integer combination of words ("x1.x2 - 2*x1 + 3*1").
pub fn parse_free_elem(src: &str, m: u8) -> Result<FreeElem> {
    let toks = lex(src)?;
    let mut p = Parser { toks, pos: 0 };
    let mut out = FreeElem::zero();
    let mut negative = if p.eat_sym('-') {
        true
    } else {
        p.eat_sym('+');
        false
    };
    loop {
        let coeff = if matches!(p.peek().tok, Tok::Int(ref v) if !v.is_one())
            || (matches!(p.peek().tok, Tok::Int(_))
                && matches!(p.toks.get(p.pos + 1).map(|s| &s.tok), Some(Tok::Sym('*'))))
        {
            let (v, _, _) = p.expect_int("a coefficient")?;
            p.expect_sym('*', "'*'")?;
            v
        } else {
            BigInt::one()
        };
        let coeff = if negative { -coeff } else { coeff };
        let word = p.parse_word(m)?;
        out.add_term(word, coeff);
        if p.eat_sym('+') {
            negative = false;
        } else if p.eat_sym('-') {
            negative = true;
        } else {
            break;
        }
    }
    p.expect_eof()?;
    Ok(out)
}

fn render_basis(b: &GammaBasisElem) -> String {
    if b.parts().is_empty() {
        return format!("D({};)", b.n());
    }
    let parts: Vec<String> = b
        .parts()
        .iter()
        .map(|(w, k)| {
            if *k == 1 {
                w.to_string()
            } else {
                format!("{w}^{k}")
            }
        })
        .collect();
    format!("D({}; {})", b.n(), parts.join(", "))
}

/// Canonical text for an element; `parse_element` inverts this exactly.
pub fn render_element(u: &GammaElem) -> String {
    if u.is_zero() {
        return format!("0*D({};)", u.n());
    }
    let mut s = String::new();
    for (idx, (b, c)) in u.terms().enumerate() {
        let mag = c.abs();
        if idx == 0 {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if c.is_negative() { " - " } else { " + " });
        }
        if !mag.is_one() {
            s.push_str(&mag.to_string());
            s.push('*');
        }
        s.push_str(&render_basis(b));
    }
    s
}

/// Canonical text for a free-algebra element.
pub fn render_free_elem(f: &FreeElem) -> String {
    if f.is_zero() {
        return "0*1".into();
    }
    let mut s = String::new();
    for (idx, (w, c)) in f.terms().enumerate() {
        let mag = c.abs();
        if idx == 0 {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if c.is_negative() { " - " } else { " + " });
        }
        if w.is_empty() {
            if mag.is_one() {
                s.push('1');
            } else {
                s.push_str(&format!("{mag}*1"));
            }
        } else {
            if !mag.is_one() {
                s.push_str(&format!("{mag}*"));
            }
            s.push_str(&w.to_string());
        }
    }
    s
}

/// Stable JSON form of an element: terms in canonical order, coefficients
/// as strings.
pub fn element_to_json(u: &GammaElem) -> Value {
    let terms: Vec<Value> = u
        .terms()
        .map(|(b, c)| {
            let parts: Vec<Value> = b
                .parts()
                .iter()
                .map(|(w, k)| json!({"word": w.to_string(), "mult": k}))
                .collect();
            json!({"coeff": c.to_string(), "parts": parts})
        })
        .collect();
    json!({"n": u.n(), "terms": terms})
}

/// Stable JSON form of a polynomial: terms largest-first in graded-lex
/// order, monomials as (variable, exponent) pairs.
pub fn poly_to_json(p: &MultiPoly) -> Value {
    let mut terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| {
            let mono: Vec<Value> = m
                .iter()
                .map(|(v, e)| json!([v.to_string(), e]))
                .collect();
            json!({"coeff": c.to_string(), "monomial": mono})
        })
        .collect();
    terms.reverse();
    json!({"terms": terms})
}

impl fmt::Display for GammaBasisElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_basis(self))
    }
}

impl fmt::Display for GammaElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_element(self))
    }
}

impl fmt::Display for FreeElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_free_elem(self))
    }
}
