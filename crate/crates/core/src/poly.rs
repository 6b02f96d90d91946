//! Sparse multivariate polynomials with number-field coefficients, plus a
//! small text parser for equations in configuration files.

use crate::arith::{format_rat, parse_rat, Rat};
use crate::nfcore::{FieldElement, NumberField};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    pub nvars: usize,
    pub terms: BTreeMap<Monomial, FieldElement>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {0:?} at offset {1}")]
    Unexpected(char, usize),
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("bad number {0:?}")]
    BadNumber(String),
    #[error("unexpected end of input")]
    Eof,
    #[error("coordinate vector has {0} entries, field degree is {1}")]
    BadCoordinates(usize, usize),
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: FieldElement, nvars: usize) -> Poly {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(f: &NumberField, i: usize, nvars: usize) -> Poly {
        let mut m = vec![0; nvars];
        m[i] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(m, f.one());
        p
    }

    pub fn monomial(c: FieldElement, exps: Monomial) -> Poly {
        let nvars = exps.len();
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, f: &NumberField, c: &FieldElement) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (m, a) in &self.terms {
            r.add_term(m.clone(), f.mul(a, c));
        }
        r
    }

    pub fn mul(&self, f: &NumberField, o: &Poly) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (m1, a) in &self.terms {
            for (m2, b) in &o.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(x, y)| x + y).collect();
                r.add_term(m, f.mul(a, b));
            }
        }
        r
    }

    pub fn pow(&self, f: &NumberField, e: u32) -> Poly {
        let mut r = Poly::constant(f.one(), self.nvars);
        for _ in 0..e {
            r = r.mul(f, self);
        }
        r
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Degree of each term restricted to the variables in `block`.
    pub fn block_degrees(&self, block: std::ops::Range<usize>) -> Vec<u32> {
        self.terms
            .keys()
            .map(|m| m[block.clone()].iter().sum())
            .collect()
    }

    /// Homogeneous with respect to each block of variables.
    pub fn is_multihomogeneous(&self, blocks: &[std::ops::Range<usize>]) -> bool {
        blocks.iter().all(|b| {
            let degs = self.block_degrees(b.clone());
            degs.windows(2).all(|w| w[0] == w[1])
        })
    }

    pub fn eval(&self, f: &NumberField, point: &[FieldElement]) -> FieldElement {
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                if e > 0 {
                    t = f.mul(&t, &f.pow(x, e));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Substitutes polynomial `subs[i]` for variable `i`.
    pub fn substitute(&self, f: &NumberField, subs: &[Poly]) -> Poly {
        let nv = subs.first().map(|s| s.nvars).unwrap_or(0);
        let mut acc = Poly::zero(nv);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone(), nv);
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = t.mul(f, &subs[i].pow(f, e));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut r = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[i] > 0 {
                let mut m2 = m.clone();
                m2[i] -= 1;
                r.add_term(m2, c.scale(&Rat::from_integer(m[i].into())));
            }
        }
        r
    }

    /// Integer coefficients in the integral basis, if all fit in `i64`.
    pub fn int_terms(&self) -> Option<Vec<(Monomial, Vec<i64>)>> {
        self.terms
            .iter()
            .map(|(m, c)| c.int_coords().map(|v| (m.clone(), v)))
            .collect()
    }

    /// Deterministic text form: terms in ascending exponent order, each as
    /// `coeff*x^e`, coefficients written as integral-basis coordinate lists
    /// (bare rationals for degree-one fields).
    pub fn to_text(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                out.push_str(" + ");
            }
            if c.coords.len() == 1 {
                let _ = write!(out, "{}", format_rat(&c.coords[0]));
            } else {
                let _ = write!(out, "{c}");
            }
            for (i, &e) in m.iter().enumerate() {
                if e == 1 {
                    let _ = write!(out, "*{}", names[i]);
                } else if e > 1 {
                    let _ = write!(out, "*{}^{}", names[i], e);
                }
            }
        }
        out
    }

    /// Parses an expression such as `x0*y0^3 - 2*x1 + [1,1]*t`. Numbers may
    /// be integers or `p/q`; `[c0,c1,...]` is a field element in the integral
    /// basis; `theta` denotes the root of the minimal polynomial.
    pub fn parse(f: &NumberField, text: &str, names: &[String]) -> Result<Poly, ParseError> {
        let mut p = Parser {
            f,
            s: text.as_bytes(),
            i: 0,
            names,
        };
        let r = p.expr()?;
        p.ws();
        if p.i < p.s.len() {
            return Err(ParseError::Unexpected(p.s[p.i] as char, p.i));
        }
        Ok(r)
    }

    /// Parses `lhs = rhs` as `lhs - rhs`, or a bare expression.
    pub fn parse_equation(
        f: &NumberField,
        text: &str,
        names: &[String],
    ) -> Result<Poly, ParseError> {
        match text.split_once('=') {
            Some((l, r)) => Ok(Poly::parse(f, l, names)?.sub(&Poly::parse(f, r, names)?)),
            None => Poly::parse(f, text, names),
        }
    }
}

struct Parser<'a> {
    f: &'a NumberField,
    s: &'a [u8],
    i: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && (self.s[self.i] as char).is_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.s.get(self.i).map(|&c| c as char)
    }

    fn nv(&self) -> usize {
        self.names.len()
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.i += 1;
                self.term()?.neg()
            }
            Some('+') => {
                self.i += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.i += 1;
                    acc = acc.add(&self.term()?);
                }
                Some('-') => {
                    self.i += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.i += 1;
            acc = acc.mul(self.f, &self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.i += 1;
            self.ws();
            let start = self.i;
            while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                self.i += 1;
            }
            let e: u32 = std::str::from_utf8(&self.s[start..self.i])
                .unwrap()
                .parse()
                .map_err(|_| ParseError::BadNumber("exponent".into()))?;
            return Ok(base.pow(self.f, e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly, ParseError> {
        let c = self.peek().ok_or(ParseError::Eof)?;
        if c == '(' {
            self.i += 1;
            let e = self.expr()?;
            if self.peek() != Some(')') {
                return Err(ParseError::Eof);
            }
            self.i += 1;
            return Ok(e);
        }
        if c == '-' {
            self.i += 1;
            return Ok(self.factor()?.neg());
        }
        if c == '[' {
            self.i += 1;
            let start = self.i;
            while self.i < self.s.len() && self.s[self.i] != b']' {
                self.i += 1;
            }
            if self.i >= self.s.len() {
                return Err(ParseError::Eof);
            }
            let body = std::str::from_utf8(&self.s[start..self.i]).unwrap();
            self.i += 1;
            let coords: Option<Vec<Rat>> = body.split(',').map(parse_rat).collect();
            let coords = coords.ok_or_else(|| ParseError::BadNumber(body.to_string()))?;
            if coords.len() != self.f.degree() {
                return Err(ParseError::BadCoordinates(coords.len(), self.f.degree()));
            }
            return Ok(Poly::constant(FieldElement::new(coords), self.nv()));
        }
        if c.is_ascii_digit() {
            let start = self.i;
            while self.i < self.s.len()
                && (self.s[self.i].is_ascii_digit() || self.s[self.i] == b'/')
            {
                self.i += 1;
            }
            let txt = std::str::from_utf8(&self.s[start..self.i]).unwrap();
            let r = parse_rat(txt).ok_or_else(|| ParseError::BadNumber(txt.to_string()))?;
            return Ok(Poly::constant(self.f.from_rat(r), self.nv()));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = self.i;
            while self.i < self.s.len()
                && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_')
            {
                self.i += 1;
            }
            let name = std::str::from_utf8(&self.s[start..self.i]).unwrap();
            if let Some(k) = self.names.iter().position(|n| n == name) {
                return Ok(Poly::var(self.f, k, self.nv()));
            }
            if name == "theta" {
                return Ok(Poly::constant(self.f.theta(), self.nv()));
            }
            return Err(ParseError::UnknownVariable(name.to_string()));
        }
        Err(ParseError::Unexpected(c, self.i))
    }
}

pub fn var_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn parse_and_evaluate() {
        let gi = NumberField::gaussian();
        let names = var_names("x", 2);
        let p = Poly::parse(&gi, "x0^2 + x1^2 - 1", &names).unwrap();
        let one = gi.one();
        let i = gi.theta();
        assert!(p.eval(&gi, &[one.clone(), gi.zero()]).is_zero());
        // 1 + i^2 - 1 = -1
        assert_eq!(p.eval(&gi, &[one, i]), gi.from_int(-1));
        let q = Poly::parse_equation(&gi, "[0,1]*x0 = theta*x0", &names).unwrap();
        assert!(q.is_zero());
        assert!(Poly::parse(&gi, "x0 + z", &names).is_err());
    }

    #[test]
    fn homogeneity_and_text() {
        let q = NumberField::rationals();
        let names = var_names("u", 4);
        let p = Poly::parse(&q, "u0*u3 - u1^2 - u2^2", &names).unwrap();
        assert!(p.is_multihomogeneous(&[0..4]));
        assert_eq!(p.total_degree(), Some(2));
        assert_eq!(p.to_text(&names), "-1*u2^2 + -1*u1^2 + 1*u0*u3");
        let d = p.derivative(0);
        assert_eq!(
            d.eval(&q, &[q.zero(), q.zero(), q.zero(), q.from_int(5)]),
            q.from_rat(rat(5))
        );
    }
}
