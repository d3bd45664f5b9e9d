//! Expression text: parsing and pretty printing.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' power]
//! atom   := rational | tvar | xvar | oterm | '(' expr ')'
//! rational := INT ['/' INT]
//! tvar   := 't' INT                       -- power may be rational: t0^(1/2), t0^(-1)
//! xvar   := 'x' INT ("'")* ['^(' INT ')'] -- apostrophes or ^(k) mark derivatives
//! oterm  := 'O(' tvar '^' power ')' | 'O(' tvar ')'
//! power  := INT | '(' ['-'] INT ['/' INT] ')'
//! ```
//!
//! A parenthesized caret directly after `xN` is a derivative mark
//! (`x1^(2)` ≡ `x1''`); an unparenthesized caret is a power (`x1^2` is a
//! square). Powers of general parenthesized expressions must be nonnegative
//! integers; powers of `tN` may be any rational in the level's lattice.
//!
//! `print ∘ parse` is the identity up to normal form, and `parse ∘ print`
//! is the identity on normal forms.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::diffpoly::{DiffPoly, Monomial};
use crate::error::{Error, Result};
use crate::rational::{format_rational, rat_int, Rational};
use crate::tower::{Prec, Tower, TowerElement};

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Tick,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let mut toks = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("digit run");
                toks.push((start, Tok::Int(n)));
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric()) {
                    i += 1;
                }
                toks.push((start, Tok::Ident(src[start..i].to_string())));
            }
            b'\'' => {
                toks.push((i, Tok::Tick));
                i += 1;
            }
            b'+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            b'*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            b'^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            b'/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            b'(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            _ => {
                return Err(Error::SyntaxError {
                    pos: i,
                    msg: format!("unexpected character `{}`", &src[i..i + 1]),
                })
            }
        }
    }
    Ok(toks)
}

impl Lexer {
    fn new(src: &str) -> Result<Self> {
        let toks = lex(src)?;
        Ok(Lexer {
            toks,
            pos: 0,
            len: src.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.len)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<()> {
        let pos = self.here();
        match self.bump() {
            Some(ref t) if t == want => Ok(()),
            _ => Err(Error::SyntaxError {
                pos,
                msg: format!("expected {what}"),
            }),
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::SyntaxError {
            pos: self.here(),
            msg: msg.into(),
        })
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    lex: Lexer,
    tower: &'a Tower,
    num_vars: usize,
    /// highest differential variable index actually seen (1-based count)
    seen_vars: usize,
}

impl<'a> Parser<'a> {
    /// Parses a signed integer or `p/q` fraction after an optional minus.
    fn rational_after(&mut self, neg: bool, first: BigInt) -> Rational {
        let mut q = Rational::from_integer(first);
        if self.lex.peek() == Some(&Tok::Slash) {
            if let Some(Tok::Int(_)) = self.lex.peek2() {
                self.lex.bump();
                if let Some(Tok::Int(d)) = self.lex.bump() {
                    q = Rational::new(q.numer().clone(), d);
                }
            }
        }
        if neg {
            -q
        } else {
            q
        }
    }

    /// `power := INT | '(' ['-'] INT ['/' INT] ')'`
    fn parse_power(&mut self) -> Result<Rational> {
        match self.lex.bump() {
            Some(Tok::Int(n)) => Ok(self.rational_after(false, n)),
            Some(Tok::LParen) => {
                let neg = if self.lex.peek() == Some(&Tok::Minus) {
                    self.lex.bump();
                    true
                } else {
                    false
                };
                let n = match self.lex.bump() {
                    Some(Tok::Int(n)) => n,
                    _ => return self.lex.err("expected integer in exponent"),
                };
                let q = self.rational_after(neg, n);
                self.lex.expect(&Tok::RParen, "`)` after exponent")?;
                Ok(q)
            }
            _ => self.lex.err("expected exponent"),
        }
    }

    fn var_index(&self, name: &str) -> Result<(char, usize)> {
        let kind = name.chars().next().unwrap();
        let digits = &name[1..];
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::UnknownVariable(name.to_string()));
        }
        let idx: usize = digits
            .parse()
            .map_err(|_| Error::UnknownVariable(name.to_string()))?;
        Ok((kind, idx))
    }

    /// `atom` and an optional trailing power.
    fn parse_factor(&mut self) -> Result<DiffPoly> {
        let level = self.tower.height();
        let pos = self.lex.here();
        match self.lex.bump() {
            Some(Tok::Int(n)) => {
                let q = self.rational_after(false, n);
                let mut out = DiffPoly::constant(self.num_vars, self.tower.scalar(q));
                if self.lex.peek() == Some(&Tok::Caret) {
                    self.lex.bump();
                    let p = self.parse_power()?;
                    out = self.int_pow(out, &p, pos)?;
                }
                Ok(out)
            }
            Some(Tok::LParen) => {
                let inner = self.parse_expr()?;
                self.lex.expect(&Tok::RParen, "`)`")?;
                if self.lex.peek() == Some(&Tok::Caret) {
                    self.lex.bump();
                    let p = self.parse_power()?;
                    return self.int_pow(inner, &p, pos);
                }
                Ok(inner)
            }
            Some(Tok::Ident(name)) if name == "O" => {
                // O(tk^p) -- a term known to be zero below exponent p
                self.lex.expect(&Tok::LParen, "`(` after O")?;
                let vname = match self.lex.bump() {
                    Some(Tok::Ident(v)) => v,
                    _ => return self.lex.err("expected series variable inside O(...)"),
                };
                let (kind, idx) = self.var_index(&vname)?;
                if kind != 't' {
                    return Err(Error::UnknownVariable(vname));
                }
                if idx >= self.tower.height() {
                    return Err(Error::UnknownVariable(vname));
                }
                let p = if self.lex.peek() == Some(&Tok::Caret) {
                    self.lex.bump();
                    self.parse_power()?
                } else {
                    rat_int(1)
                };
                self.lex.expect(&Tok::RParen, "`)` after O(...)")?;
                let o = TowerElement::big_o(idx + 1, p).lift_to(level);
                Ok(DiffPoly::constant(self.num_vars, o))
            }
            Some(Tok::Ident(name)) => {
                let (kind, idx) = self.var_index(&name)?;
                match kind {
                    't' => {
                        if idx >= self.tower.height() {
                            return Err(Error::UnknownVariable(name));
                        }
                        let e = if self.lex.peek() == Some(&Tok::Caret) {
                            self.lex.bump();
                            self.parse_power()?
                        } else {
                            rat_int(1)
                        };
                        let elem = self.tower.var_pow(idx, &e)?;
                        Ok(DiffPoly::constant(self.num_vars, elem))
                    }
                    'x' => {
                        if idx == 0 || idx > self.num_vars {
                            return Err(Error::UnknownVariable(name));
                        }
                        self.seen_vars = self.seen_vars.max(idx);
                        let var = idx - 1;
                        let mut order: u32 = 0;
                        while self.lex.peek() == Some(&Tok::Tick) {
                            self.lex.bump();
                            order += 1;
                        }
                        // parenthesized caret directly after the bare name is
                        // the ^(k) derivative alias
                        if order == 0
                            && self.lex.peek() == Some(&Tok::Caret)
                            && self.lex.peek2() == Some(&Tok::LParen)
                        {
                            self.lex.bump();
                            let p = self.parse_power()?;
                            if !p.denom().is_one() || p.is_negative() {
                                return Err(Error::SyntaxError {
                                    pos,
                                    msg: "derivative order must be a nonnegative integer".into(),
                                });
                            }
                            order = p
                                .to_integer()
                                .try_into()
                                .map_err(|_| Error::SyntaxError {
                                    pos,
                                    msg: "derivative order too large".into(),
                                })?;
                        }
                        let mut out = DiffPoly::variable(self.num_vars, level, var, order);
                        if self.lex.peek() == Some(&Tok::Caret) {
                            self.lex.bump();
                            let p = self.parse_power()?;
                            out = self.int_pow(out, &p, pos)?;
                        }
                        Ok(out)
                    }
                    _ => Err(Error::UnknownVariable(name)),
                }
            }
            _ => Err(Error::SyntaxError {
                pos,
                msg: "expected a term".into(),
            }),
        }
    }

    fn int_pow(&self, base: DiffPoly, p: &Rational, pos: usize) -> Result<DiffPoly> {
        if !p.denom().is_one() || p.is_negative() {
            // negative integer powers are allowed on constant series only;
            // fractional powers belong to bare t-monomials, which
            // parse_factor handles before reaching here
            if p.denom().is_one() {
                if let Some(c) = base.constant_coefficient() {
                    let n: i64 = p.to_integer().try_into().map_err(|_| Error::SyntaxError {
                        pos,
                        msg: "exponent too large".into(),
                    })?;
                    let v = c.pow(n, self.tower)?;
                    return Ok(DiffPoly::constant(self.num_vars, v));
                }
            }
            return Err(Error::SyntaxError {
                pos,
                msg: "power must be a nonnegative integer".into(),
            });
        }
        let n: u32 = p
            .to_integer()
            .try_into()
            .map_err(|_| Error::SyntaxError {
                pos,
                msg: "exponent too large".into(),
            })?;
        let mut out = DiffPoly::constant_one(self.num_vars, self.tower.height());
        for _ in 0..n {
            out = out.mul(&base);
        }
        Ok(out)
    }

    fn parse_term(&mut self) -> Result<DiffPoly> {
        let mut out = self.parse_factor()?;
        while self.lex.peek() == Some(&Tok::Star) {
            self.lex.bump();
            let f = self.parse_factor()?;
            out = out.mul(&f);
        }
        Ok(out)
    }

    fn parse_expr(&mut self) -> Result<DiffPoly> {
        let mut neg = false;
        if self.lex.peek() == Some(&Tok::Minus) {
            self.lex.bump();
            neg = true;
        } else if self.lex.peek() == Some(&Tok::Plus) {
            self.lex.bump();
        }
        let mut out = self.parse_term()?;
        if neg {
            out = out.neg();
        }
        loop {
            match self.lex.peek() {
                Some(Tok::Plus) => {
                    self.lex.bump();
                    let t = self.parse_term()?;
                    out = out.add(&t);
                }
                Some(Tok::Minus) => {
                    self.lex.bump();
                    let t = self.parse_term()?;
                    out = out.sub(&t);
                }
                _ => break,
            }
        }
        Ok(out)
    }
}

fn count_x_vars(src: &str) -> usize {
    let toks = match lex(src) {
        Ok(t) => t,
        Err(_) => return 0,
    };
    let mut max = 0usize;
    for (_, t) in toks {
        if let Tok::Ident(name) = t {
            if let Some(rest) = name.strip_prefix('x') {
                if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
                    if let Ok(n) = rest.parse::<usize>() {
                        max = max.max(n);
                    }
                }
            }
        }
    }
    max
}

/// Parses a differential polynomial with variables `x1..xm` and series
/// coefficients over the tower. `num_vars` defaults to the highest variable
/// index mentioned.
pub fn parse_diff_poly(
    src: &str,
    tower: &Tower,
    num_vars: Option<usize>,
) -> Result<DiffPoly> {
    let num_vars = num_vars.unwrap_or_else(|| count_x_vars(src));
    let mut p = Parser {
        lex: Lexer::new(src)?,
        tower,
        num_vars,
        seen_vars: 0,
    };
    let out = p.parse_expr()?;
    if p.lex.peek().is_some() {
        return p.lex.err("trailing input");
    }
    Ok(out)
}

/// Parses a pure series expression (no `xN` variables allowed).
pub fn parse_series(src: &str, tower: &Tower) -> Result<TowerElement> {
    let poly = parse_diff_poly(src, tower, Some(0))?;
    poly.constant_coefficient()
        .ok_or_else(|| Error::SyntaxError {
            pos: 0,
            msg: "expected a series, found differential variables".into(),
        })
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

fn format_exponent(e: &Rational) -> String {
    if e.denom().is_one() && !e.is_negative() {
        e.numer().to_string()
    } else {
        format!("({})", format_rational(e))
    }
}

/// One printed series term; `sign` is split off so callers can join with
/// `+`/`-`.
fn series_term_strings(level: usize, out: &mut Vec<(bool, String)>, e: &Rational, c: &TowerElement) {
    let var = format!("t{}", level - 1);
    let (neg, coeff_str, is_one) = format_coefficient(c);
    let mut s = String::new();
    if e.is_zero() {
        s.push_str(if is_one { "1" } else { &coeff_str });
    } else {
        if !is_one {
            s.push_str(&coeff_str);
            s.push('*');
        }
        s.push_str(&var);
        if !(e.denom().is_one() && e.numer().is_one()) {
            s.push('^');
            s.push_str(&format_exponent(e));
        }
    }
    out.push((neg, s));
}

/// Formats a coefficient for use inside a product: returns (sign-peeled,
/// text, is-plus-one). Multi-term or imprecise coefficients are
/// parenthesized.
fn format_coefficient(c: &TowerElement) -> (bool, String, bool) {
    match c {
        TowerElement::Scalar(q) => {
            let neg = q.is_negative();
            let a = q.abs();
            (neg, format_rational(&a), a.is_one())
        }
        TowerElement::Series(s) => {
            let single_exact = s.prec == Prec::Infinite && s.terms.len() == 1;
            if single_exact {
                let (e, inner) = s.terms.iter().next().unwrap();
                let (neg, istr, iones) = format_coefficient(inner);
                if e.is_zero() {
                    return (neg, istr, iones);
                }
                let var = format!("t{}", s.level - 1);
                let mut out = String::new();
                if !iones {
                    out.push_str(&istr);
                    out.push('*');
                }
                out.push_str(&var);
                if !(e.denom().is_one() && e.numer().is_one()) {
                    out.push('^');
                    out.push_str(&format_exponent(e));
                }
                (neg, out, false)
            } else if s.terms.is_empty() && s.prec != Prec::Infinite {
                // pure O-term: an atom, no parens needed
                (false, format_series(c), false)
            } else {
                (false, format!("({})", format_series(c)), false)
            }
        }
    }
}

fn join_signed(parts: Vec<(bool, String)>) -> String {
    let mut out = String::new();
    for (i, (neg, s)) in parts.into_iter().enumerate() {
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&s);
    }
    out
}

/// Canonical text of a series: ascending exponents, `O(t^p)` marker when
/// truncated.
pub fn format_series(elem: &TowerElement) -> String {
    match elem {
        TowerElement::Scalar(q) => format_rational(q),
        TowerElement::Series(s) => {
            let mut parts = Vec::new();
            for (e, c) in &s.terms {
                series_term_strings(s.level, &mut parts, e, c);
            }
            let mut text = join_signed(parts);
            if let Prec::Finite(p) = &s.prec {
                let var = format!("t{}", s.level - 1);
                let marker = if p.denom().is_one() && p.numer().is_one() {
                    format!("O({var})")
                } else {
                    format!("O({var}^{})", format_exponent(p))
                };
                if text.is_empty() {
                    text = marker;
                } else {
                    text = format!("{text} + {marker}");
                }
            } else if text.is_empty() {
                text = "0".into();
            }
            text
        }
    }
}

fn format_monomial(m: &Monomial) -> String {
    let mut pieces = Vec::new();
    for (&(var, order), &exp) in m.powers() {
        let mut s = format!("x{}", var + 1);
        match order {
            0 => {}
            1..=3 => {
                for _ in 0..order {
                    s.push('\'');
                }
            }
            _ => s.push_str(&format!("^({order})")),
        }
        if exp > 1 {
            s.push_str(&format!("^{exp}"));
        }
        pieces.push(s);
    }
    pieces.join("*")
}

/// Canonical text of a differential polynomial: monomials in normal-form
/// order, coefficients as series literals.
pub fn format_diff_poly(f: &DiffPoly) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (m, c) in f.iter_terms() {
        if m.is_empty() {
            let (neg, s, _) = format_coefficient(c);
            parts.push((neg, s));
        } else {
            let (neg, cstr, is_one) = format_coefficient(c);
            let mstr = format_monomial(m);
            let s = if is_one {
                mstr
            } else {
                format!("{cstr}*{mstr}")
            };
            parts.push((neg, s));
        }
    }
    join_signed(parts)
}
