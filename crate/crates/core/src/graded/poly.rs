//! Integer polynomials over a fixed list of variables, and a small parser
//! for polynomial expressions.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::{Degree, Int};

/// Exponent vector of a monomial.
pub type Exponents = Vec<u32>;

/// Sparse polynomial with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Exponents, Int>,
}

/// Homogeneity of a polynomial under a weighting of its variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Homogeneous(Degree),
    Mixed,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Int::one())
    }

    pub fn constant(nvars: usize, c: Int) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Int::one())
    }

    pub fn monomial(exps: Exponents, c: Int) -> Self {
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Self { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Int)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Int {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, exps: Exponents, c: Int) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn scale(&self, k: &Int) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn constant_term(&self) -> Int {
        self.coefficient(&vec![0; self.nvars])
    }

    pub fn weighted_degree(exps: &[u32], weights: &[Degree]) -> Degree {
        exps.iter()
            .zip(weights)
            .fold(Degree::zero(), |acc, (&e, w)| acc + *w * Degree::from(e as i64))
    }

    pub fn homogeneity(&self, weights: &[Degree]) -> Homogeneity {
        let mut deg = None;
        for e in self.terms.keys() {
            let d = Self::weighted_degree(e, weights);
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return Homogeneity::Mixed,
                _ => {}
            }
        }
        match deg {
            None => Homogeneity::Zero,
            Some(d) => Homogeneity::Homogeneous(d),
        }
    }

    /// Reinterprets the polynomial in `nvars` variables, variable `i` going
    /// to variable `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars, "embedding map has wrong length");
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; nvars];
            for (i, &x) in e.iter().enumerate() {
                ne[map[i]] += x;
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Substitutes `images[i]` for variable `i`.
    pub fn substitute(&self, images: &[Polynomial]) -> Self {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let target = images.first().map_or(0, |p| p.nvars);
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (img, &k) in images.iter().zip(e) {
                if k > 0 {
                    term = &term * &img.pow(k);
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Coefficients of the powers of variable `i`; the returned polynomials
    /// have exponent zero in that variable.
    pub fn split_by_var(&self, i: usize) -> BTreeMap<u32, Polynomial> {
        let mut out: BTreeMap<u32, Polynomial> = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[i];
            let mut rest = e.clone();
            rest[i] = 0;
            out.entry(k)
                .or_insert_with(|| Polynomial::zero(self.nvars))
                .add_term(rest, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Multiplies by the monomial with the given exponents.
    pub fn shift(&self, exps: &[u32]) -> Self {
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(exps).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Renders the polynomial with the given variable names.
    pub fn render(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut keys: Vec<&Exponents> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let sa: u32 = a.iter().sum();
            let sb: u32 = b.iter().sum();
            sb.cmp(&sa).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (idx, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].to_string() } else { format!("{}^{}", names[i], k) })
                .collect();
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if factors.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut out = Polynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

/// Failure to parse a polynomial expression; `offset` is a byte offset.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Int),
    Ident(String),
    Sym(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        if ch.is_ascii_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: Int = src[start..i].parse().expect("digits");
            out.push((start, Tok::Num(n)));
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*^()".contains(ch) {
            out.push((i, Tok::Sym(ch)));
            i += 1;
        } else {
            return Err(ParseError { offset: i, message: format!("unexpected character '{ch}'") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    names: &'a [&'a str],
}

impl Parser<'_> {
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset: self.offset(), message: message.into() })
    }

    fn peek_sym(&self, c: char) -> bool {
        matches!(self.toks.get(self.pos), Some((_, Tok::Sym(s))) if *s == c)
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.peek_sym('+') {
                self.pos += 1;
                acc = &acc + &self.term()?;
            } else if self.peek_sym('-') {
                self.pos += 1;
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        while self.peek_sym('*') {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        if self.peek_sym('-') {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if self.peek_sym('^') {
            self.pos += 1;
            match self.toks.get(self.pos) {
                Some((_, Tok::Num(n))) => {
                    let k: u32 = match u32::try_from(n) {
                        Ok(k) if k <= 64 => k,
                        _ => return self.err("exponent too large"),
                    };
                    self.pos += 1;
                    return Ok(base.pow(k));
                }
                _ => return self.err("expected a non-negative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let n = self.names.len();
        match self.toks.get(self.pos).cloned() {
            Some((_, Tok::Num(c))) => {
                self.pos += 1;
                Ok(Polynomial::constant(n, c))
            }
            Some((_, Tok::Ident(name))) => match self.names.iter().position(|x| *x == name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(Polynomial::var(n, i))
                }
                None => self.err(format!("unknown generator '{name}'")),
            },
            Some((_, Tok::Sym('('))) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.peek_sym(')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => self.err("expected a number, generator or '('"),
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Parses an integer polynomial in the given variable names.
///
/// Grammar: sums and differences of products of powers; `^` takes a
/// literal non-negative exponent; unary minus is allowed.
pub fn parse_polynomial(src: &str, names: &[&str]) -> Result<Polynomial, ParseError> {
    let toks = tokenize(src)?;
    if toks.is_empty() {
        return Err(ParseError { offset: 0, message: "empty expression".into() });
    }
    let mut p = Parser { toks, pos: 0, end: src.len(), names };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        let names = ["h", "t"];
        let p = parse_polynomial("h + 2*t", &names).unwrap();
        assert_eq!(p.render(&names), "h + 2*t");
        let q = parse_polynomial("(h - t)^2", &names).unwrap();
        let expect = parse_polynomial("h^2 - 2*h*t + t^2", &names).unwrap();
        assert_eq!(q, expect);
        assert_eq!(parse_polynomial("-t", &names).unwrap().render(&names), "-t");
        assert_eq!(parse_polynomial("0", &names).unwrap().render(&names), "0");
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let e = parse_polynomial("h + x", &["h"]).unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(parse_polynomial("h +", &["h"]).is_err());
        assert!(parse_polynomial("h $ h", &["h"]).is_err());
        assert!(parse_polynomial("h^h", &["h"]).is_err());
    }

    #[test]
    fn homogeneity_and_split() {
        let names = ["h", "t"];
        let w = [Degree::from(1), Degree::from(1)];
        let p = parse_polynomial("h*t + 3*t^2", &names).unwrap();
        assert_eq!(p.homogeneity(&w), Homogeneity::Homogeneous(Degree::from(2)));
        let q = parse_polynomial("h + t^2", &names).unwrap();
        assert_eq!(q.homogeneity(&w), Homogeneity::Mixed);
        let parts = p.split_by_var(1);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[&2], Polynomial::constant(2, Int::from(3)));
    }

    #[test]
    fn substitution_is_a_ring_map() {
        let a = parse_polynomial("x^2 + x*y", &["x", "y"]).unwrap();
        let imgs = vec![
            parse_polynomial("2*u", &["u"]).unwrap(),
            parse_polynomial("u + 1", &["u"]).unwrap(),
        ];
        let got = a.substitute(&imgs);
        let want = parse_polynomial("4*u^2 + 2*u*(u+1)", &["u"]).unwrap();
        assert_eq!(got, want);
    }
}
