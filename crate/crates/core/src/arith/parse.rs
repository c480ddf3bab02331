//! Text grammar for polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/')? unary)*      juxtaposition multiplies
//! unary  := ('+' | '-') unary | power
//! power  := atom (('^' | '**') integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! Division is only allowed by nonzero constants, so every expression is a
//! polynomial with rational coefficients. A polynomial file may start with
//! header lines:
//!
//! ```text
//! # comment
//! vars: x, y, z
//! field: a, minpoly: Z^3 - 2
//! ```
//!
//! and the remaining lines are joined into one expression.

use num_bigint::BigInt;
use num_traits::Zero;

use super::field::{Field, Rational, Rationals};
use super::number_field::NumberField;
use super::poly::{Monomial, MultiPoly, RatPoly};
use super::univariate::UniPoly;
use crate::error::{Error, Result};

const MAX_DEPTH: usize = 200;
const MAX_EXPONENT: u32 = 256;
const MAX_DEGREE: u32 = 1024;
const MAX_TERM_PRODUCT: usize = 4_000_000;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().map_err(|_| parse_err(start, "bad integer"))?;
                out.push((start, Token::Num(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Token::Ident(src[start..i].to_string())));
                continue;
            }
            '+' => out.push((i, Token::Plus)),
            '-' => out.push((i, Token::Minus)),
            '*' => {
                if bytes.get(i + 1) == Some(&b'*') {
                    out.push((i, Token::Caret));
                    i += 1;
                } else {
                    out.push((i, Token::Star));
                }
            }
            '/' => out.push((i, Token::Slash)),
            '^' => out.push((i, Token::Caret)),
            '(' => out.push((i, Token::LParen)),
            ')' => out.push((i, Token::RParen)),
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(parse_err(i, &format!("unexpected character {ch:?}")));
            }
        }
        i += 1;
    }
    Ok(out)
}

fn parse_err(pos: usize, msg: &str) -> Error {
    Error::Parse(format!("at offset {pos}: {msg}"))
}

#[derive(Debug)]
enum Expr {
    Num(BigInt),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
}

struct Parser<'a> {
    toks: Vec<(usize, Token)>,
    pos: usize,
    depth: usize,
    vars: Vec<String>,
    fixed_vars: bool,
    src_len: usize,
    _src: &'a str,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.src_len)
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            Err(parse_err(self.offset(), "expression nested too deeply"))
        } else {
            Ok(())
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Token::Num(_)) | Some(Token::Ident(_)) | Some(Token::LParen) => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                self.enter()?;
                let e = Expr::Neg(Box::new(self.unary()?));
                self.depth -= 1;
                Ok(e)
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.enter()?;
                let e = self.unary()?;
                self.depth -= 1;
                Ok(e)
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            let at = self.offset();
            match self.peek() {
                Some(Token::Num(n)) => {
                    let e: u32 = u32::try_from(n.clone())
                        .ok()
                        .filter(|&e| e <= MAX_EXPONENT)
                        .ok_or_else(|| parse_err(at, "exponent too large"))?;
                    self.pos += 1;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                _ => Err(parse_err(at, "expected a non-negative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                let idx = match self.vars.iter().position(|v| *v == name) {
                    Some(i) => i,
                    None if self.fixed_vars => {
                        return Err(parse_err(at, &format!("unknown variable {name}")));
                    }
                    None => {
                        self.vars.push(name);
                        self.vars.len() - 1
                    }
                };
                Ok(Expr::Var(idx))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(parse_err(self.offset(), "expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(t) => Err(parse_err(at, &format!("unexpected token {t:?}"))),
            None => Err(parse_err(at, "unexpected end of input")),
        }
    }
}

fn checked_mul(a: &RatPoly, b: &RatPoly) -> Result<RatPoly> {
    let deg = a.total_degree().unwrap_or(0) + b.total_degree().unwrap_or(0);
    if deg > MAX_DEGREE || a.num_terms().saturating_mul(b.num_terms()) > MAX_TERM_PRODUCT {
        return Err(Error::Parse("expression too large".into()));
    }
    Ok(a.mul(b))
}

fn eval(e: &Expr, vars: &[String]) -> Result<RatPoly> {
    Ok(match e {
        Expr::Num(n) => RatPoly::constant(&Rationals, vars, Rational::from_integer(n.clone())),
        Expr::Var(i) => RatPoly::var(&Rationals, vars, *i),
        Expr::Add(a, b) => eval(a, vars)?.add(&eval(b, vars)?),
        Expr::Sub(a, b) => eval(a, vars)?.sub(&eval(b, vars)?),
        Expr::Mul(a, b) => checked_mul(&eval(a, vars)?, &eval(b, vars)?)?,
        Expr::Neg(a) => eval(a, vars)?.neg(),
        Expr::Div(a, b) => {
            let d = eval(b, vars)?;
            if !d.is_constant() || d.is_zero() {
                return Err(Error::Parse("division by a non-constant or zero expression".into()));
            }
            let c = d.coeff(&Monomial::one(vars.len()));
            eval(a, vars)?.scale_rational(&c.recip())
        }
        Expr::Pow(a, k) => {
            let base = eval(a, vars)?;
            if base.total_degree().unwrap_or(0).saturating_mul(*k) > MAX_DEGREE {
                return Err(Error::Parse("expression too large".into()));
            }
            let mut acc = RatPoly::one(&Rationals, vars);
            let mut sq = base;
            let mut e = *k;
            while e > 0 {
                if e & 1 == 1 {
                    acc = checked_mul(&acc, &sq)?;
                }
                e >>= 1;
                if e > 0 {
                    sq = checked_mul(&sq, &sq)?;
                }
            }
            acc
        }
    })
}

fn parse_impl(src: &str, vars: Option<&[String]>) -> Result<RatPoly> {
    let toks = tokenize(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        depth: 0,
        vars: vars.map(|v| v.to_vec()).unwrap_or_default(),
        fixed_vars: vars.is_some(),
        src_len: src.len(),
        _src: src,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(parse_err(p.offset(), "trailing input"));
    }
    eval(&e, &p.vars)
}

/// Parses an expression; variables are ordered by first appearance.
pub fn parse_poly(src: &str) -> Result<RatPoly> {
    parse_impl(src, None)
}

/// Parses an expression over a fixed variable list; other identifiers are
/// rejected.
pub fn parse_poly_with_vars(src: &str, vars: &[String]) -> Result<RatPoly> {
    parse_impl(src, Some(vars))
}

/// Parses a univariate polynomial in `var`.
pub fn parse_unipoly(src: &str, var: &str) -> Result<UniPoly> {
    let p = parse_poly_with_vars(src, &[var.to_string()])?;
    Ok(to_unipoly(&p, 0))
}

/// Dense univariate view of a polynomial in the single variable `var`.
pub fn to_unipoly(p: &RatPoly, var: usize) -> UniPoly {
    let mut c = vec![Rational::zero(); p.degree_in(var) as usize + 1];
    for (m, v) in p.terms() {
        c[m.0[var] as usize] = v.clone();
    }
    UniPoly::new(c)
}

/// Parses an expression over `field`, whose generator is written as `gen`.
pub fn parse_poly_over(src: &str, field: &NumberField, vars: &[String]) -> Result<MultiPoly<NumberField>> {
    let gen = field.name().to_string();
    if vars.contains(&gen) {
        return Err(Error::Parse(format!("generator {gen} clashes with a variable")));
    }
    let mut all = vars.to_vec();
    all.push(gen);
    let p = parse_poly_with_vars(src, &all)?;
    Ok(lower_generator(&p, field, vars.len()))
}

/// Reads the variable at index `gen` of a rational polynomial as the field
/// generator and returns the reduced polynomial in the remaining variables.
pub fn lower_generator(p: &RatPoly, field: &NumberField, gen: usize) -> MultiPoly<NumberField> {
    let vars: Vec<String> = p
        .vars()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != gen)
        .map(|(_, v)| v.clone())
        .collect();
    let mut out = MultiPoly::zero(field, &vars);
    let alpha = field.generator();
    for (m, c) in p.terms() {
        let e = m.0[gen];
        let rest = Monomial(m.0.iter().enumerate().filter(|(i, _)| *i != gen).map(|(_, &x)| x).collect());
        let coeff = field.scale(&field.pow(&alpha, e), c);
        out.add_term(rest, &coeff);
    }
    out
}

/// A polynomial source with its optional header fields.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PolySource {
    pub vars: Option<Vec<String>>,
    /// `(generator name, defining polynomial text in Z)`.
    pub field: Option<(String, String)>,
    pub body: String,
}

impl PolySource {
    /// Splits header lines from the expression body.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = PolySource::default();
        let mut body = Vec::new();
        for line in text.lines() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            if let Some(rest) = t.strip_prefix("vars:") {
                let v: Vec<String> = rest.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
                if v.iter().any(|s| !is_identifier(s)) {
                    return Err(Error::Parse(format!("bad variable list: {rest}")));
                }
                out.vars = Some(v);
            } else if let Some(rest) = t.strip_prefix("field:") {
                let (name, mp) = rest
                    .split_once(',')
                    .ok_or_else(|| Error::Parse("expected `field: <name>, minpoly: <poly>`".into()))?;
                let mp = mp
                    .trim()
                    .strip_prefix("minpoly:")
                    .ok_or_else(|| Error::Parse("expected `minpoly:` after the field name".into()))?;
                let name = name.trim();
                if !is_identifier(name) {
                    return Err(Error::Parse(format!("bad generator name: {name}")));
                }
                out.field = Some((name.to_string(), mp.trim().to_string()));
            } else {
                body.push(t.to_string());
            }
        }
        if body.is_empty() {
            return Err(Error::Parse("no polynomial given".into()));
        }
        out.body = body.join(" ");
        Ok(out)
    }

    /// The number field named in the header, if any.
    pub fn number_field(&self) -> Result<Option<NumberField>> {
        match &self.field {
            None => Ok(None),
            Some((name, mp)) => Ok(Some(NumberField::new(name, parse_unipoly(mp, "Z")?)?)),
        }
    }

    /// Parses the body as a rational polynomial.
    pub fn rational(&self) -> Result<RatPoly> {
        if let Some((name, _)) = &self.field {
            return Err(Error::Parse(format!(
                "expected a rational polynomial, but a field generator {name} is declared"
            )));
        }
        match &self.vars {
            Some(v) => parse_poly_with_vars(&self.body, v),
            None => parse_poly(&self.body),
        }
    }

    /// Parses the body over the declared field (ℚ when none is declared).
    pub fn algebraic(&self) -> Result<MultiPoly<NumberField>> {
        let field = self.number_field()?.unwrap_or_else(|| NumberField::rational("a"));
        let vars = match &self.vars {
            Some(v) => v.clone(),
            None => {
                let p = parse_poly(&self.body)?;
                p.vars().iter().filter(|v| *v != field.name()).cloned().collect()
            }
        };
        parse_poly_over(&self.body, &field, &vars)
    }
}

fn is_identifier(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic() || ch == '_')
        && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

/// Maps a rational polynomial into a number field.
pub fn embed_rational(p: &RatPoly, field: &NumberField) -> MultiPoly<NumberField> {
    p.map_field(field, |c| field.from_rational(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{rat, ratio};

    #[test]
    fn parses_common_forms() {
        let p = parse_poly("10*x^4+2*x^3*y+27*x^2*y^2-24*x*y^3+5*y^4").unwrap();
        assert_eq!(p.vars(), ["x", "y"]);
        assert_eq!(p.num_terms(), 5);
        assert_eq!(p.coeff(&Monomial(vec![1, 3])), rat(-24));
        // Implicit multiplication and `**`.
        let q = parse_poly("3x^2 - 2*x*z + y**2/2").unwrap();
        assert_eq!(q.vars(), ["x", "z", "y"]);
        assert_eq!(q.coeff(&Monomial(vec![0, 0, 2])), ratio(1, 2));
        let r = parse_poly("-(x+1)^2").unwrap();
        assert_eq!(r.to_string(), "-x^2 - 2*x - 1");
    }

    #[test]
    fn rejects_bad_input() {
        for s in ["", "x +", "x/y", "x/0", "(x", "x^y", "x^-1", "x ? y", "x^100000"] {
            assert!(parse_poly(s).is_err(), "{s}");
        }
        assert!(parse_poly_with_vars("x+w", &["x".into()]).is_err());
        let deep = "(".repeat(500) + "x" + &")".repeat(500);
        assert!(parse_poly(&deep).is_err());
    }

    #[test]
    fn source_with_field_header() {
        let src = PolySource::parse("field: a, minpoly: Z^3-2\nvars: x, y\n a*x + a^3*y").unwrap();
        let p = src.algebraic().unwrap();
        let k = p.field().clone();
        assert_eq!(p.coeff(&Monomial(vec![0, 1])), k.from_int(2));
        assert_eq!(p.coeff(&Monomial(vec![1, 0])), k.generator());
        assert!(src.rational().is_err());
    }

    #[test]
    fn unipoly_parse() {
        let m = parse_unipoly("50*Z^4+28*Z^3-Z^2+23*Z-8", "Z").unwrap();
        assert_eq!(m, UniPoly::from_ints(&[-8, 23, -1, 28, 50]));
    }
}
