//! Multivariate polynomials, monomial orders and the families `F^n_k`.
//!
//! Coefficients are exact rationals for every decision-making computation;
//! `f64` coefficients are only used for normalized basis functions. Variables
//! are `x1 .. xn` with the tie-break `x1 > x2 > ... > xn` in every order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{is_negative, parse_rational, Rational, Scalar};

/// A monic monomial `x^alpha`, stored as its exponent vector.
///
/// The derived `Ord` is only a storage order for maps; use
/// [`MonomialOrder`] for anything with algebraic meaning.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Self(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Self(e)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `self | other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other | self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bit `i` set iff `x_{i+1}` occurs.
    pub fn support_mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    pub fn evaluate<C: Scalar>(&self, point: &[C]) -> C {
        let mut acc = C::one();
        for (x, &e) in point.iter().zip(&self.0) {
            for _ in 0..e {
                acc = acc.mul_ref(x);
            }
        }
        acc
    }

    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    pub fn parse(text: &str, nvars: usize) -> Result<Monomial> {
        let p = Polynomial::parse(text, nvars)?;
        match p.terms.iter().next() {
            Some((m, c)) if p.terms.len() == 1 && *c == Rational::from_integer(1.into()) => Ok(m.clone()),
            _ => Err(Error::Parse(format!("{text:?} is not a monic monomial"))),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    /// Pure lexicographic; not graded, kept to exercise graded-only operations.
    Lex,
    Grlex,
    #[default]
    Grevlex,
}

impl MonomialOrder {
    pub fn is_graded(self) -> bool {
        !matches!(self, MonomialOrder::Lex)
    }

    /// Comparison without a dimension check.
    pub fn cmp(self, u: &Monomial, v: &Monomial) -> Ordering {
        debug_assert_eq!(u.nvars(), v.nvars());
        let lex = || {
            for (a, b) in u.0.iter().zip(&v.0) {
                match a.cmp(b) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        };
        match self {
            MonomialOrder::Lex => lex(),
            MonomialOrder::Grlex => u.degree().cmp(&v.degree()).then_with(lex),
            MonomialOrder::Grevlex => u.degree().cmp(&v.degree()).then_with(|| {
                for (a, b) in u.0.iter().zip(&v.0).rev() {
                    match b.cmp(a) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }),
        }
    }

    pub fn compare(self, u: &Monomial, v: &Monomial) -> Result<Ordering> {
        if u.nvars() != v.nvars() {
            return Err(Error::DimensionMismatch { expected: u.nvars(), found: v.nvars() });
        }
        Ok(self.cmp(u, v))
    }

    pub fn sort(self, monomials: &mut [Monomial]) {
        monomials.sort_by(|a, b| self.cmp(a, b));
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MonomialOrder::Lex => "lex",
            MonomialOrder::Grlex => "grlex",
            MonomialOrder::Grevlex => "grevlex",
        })
    }
}

impl FromStr for MonomialOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lex" => Ok(MonomialOrder::Lex),
            "grlex" => Ok(MonomialOrder::Grlex),
            "grevlex" => Ok(MonomialOrder::Grevlex),
            other => Err(Error::Parse(format!("unknown monomial order {other:?}"))),
        }
    }
}

/// All monomials in `n` variables of degree `< k`, ascending under `order`.
pub fn f_n_k(n: usize, k: u32, order: MonomialOrder) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..k {
        monomials_of_degree(n, d, &mut Vec::with_capacity(n), &mut out);
    }
    order.sort(&mut out);
    out
}

fn monomials_of_degree(n: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if prefix.len() + 1 == n {
        prefix.push(remaining);
        out.push(Monomial(prefix.clone()));
        prefix.pop();
        return;
    }
    if n == 0 {
        return;
    }
    for e in 0..=remaining {
        prefix.push(e);
        monomials_of_degree(n, remaining - e, prefix, out);
        prefix.pop();
    }
}

/// Canonical sparse polynomial: no zero coefficients are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

pub type Polynomial = Poly<Rational>;
pub type RealPolynomial = Poly<f64>;

impl<C: Scalar> Poly<C> {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        Self::term(Monomial::var(nvars, index), C::one())
    }

    pub fn term(m: Monomial, c: C) -> Self {
        let mut p = Self::zero(m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Self::term(m, C::one())
    }

    /// Combines like terms and drops zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, C)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, found: m.nvars() });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.add_ref(&c);
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Result<(&Monomial, &C)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn leading_monomial(&self, order: MonomialOrder) -> Option<&Monomial> {
        self.terms.keys().max_by(|a, b| order.cmp(a, b))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: other.nvars });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.mul_ref(cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a.mul_ref(c))).collect(),
        }
    }

    /// `c * m * self`.
    pub fn mul_term(&self, m: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a.mul_ref(c))).collect(),
        }
    }

    /// `self += c * m * other`, in place.
    pub fn add_scaled_term(&mut self, other: &Self, m: &Monomial, c: &C) {
        for (t, a) in &other.terms {
            self.add_term(t.mul(m), a.mul_ref(c));
        }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, order: MonomialOrder) -> Self {
        match self.leading_term(order) {
            Ok((_, lc)) => {
                let inv = C::one().div_ref(lc);
                self.scale(&inv)
            }
            Err(_) => self.clone(),
        }
    }

    pub fn evaluate(&self, point: &[C]) -> Result<C> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: point.len() });
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[C]) -> C {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            acc = acc.add_ref(&c.mul_ref(&m.evaluate(point)));
        }
        acc
    }

    /// `x -> p(x + offset)`.
    pub fn shift(&self, offset: &[C]) -> Result<Self> {
        if offset.len() != self.nvars {
            return Err(Error::DimensionMismatch { expected: self.nvars, found: offset.len() });
        }
        let linear: Vec<Self> = offset
            .iter()
            .enumerate()
            .map(|(i, s)| &Self::var(self.nvars, i) + &Self::constant(self.nvars, s.clone()))
            .collect();
        let mut out = Self::zero(self.nvars);
        for (m, c) in &self.terms {
            let mut t = Self::constant(self.nvars, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    t = &t * &linear[i];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    pub fn to_real(&self) -> RealPolynomial {
        self.map_coeffs(|c| c.to_f64())
    }

    /// Text form `c*x1^a1*...` with terms in descending `order`.
    pub fn to_text(&self, order: MonomialOrder) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut terms: Vec<(&Monomial, &C)> = self.terms.iter().collect();
        terms.sort_by(|a, b| order.cmp(b.0, a.0));
        let mut out = String::new();
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = is_negative(c);
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&m.to_text());
            } else {
                out.push_str(&format!("{mag}*{}", m.to_text()));
            }
        }
        out
    }
}

impl<C: Scalar> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(MonomialOrder::Grevlex))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<C: Scalar> std::ops::$tr for &Poly<C> {
            type Output = Poly<C>;
            /// Panics when the variable counts differ; see the `checked_` form.
            fn $method(self, rhs: &Poly<C>) -> Poly<C> {
                self.$checked(rhs).expect("polynomial dimension mismatch")
            }
        }
        impl<C: Scalar> std::ops::$tr for Poly<C> {
            type Output = Poly<C>;
            fn $method(self, rhs: Poly<C>) -> Poly<C> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl<C: Scalar> std::ops::Neg for &Poly<C> {
    type Output = Poly<C>;
    fn neg(self) -> Poly<C> {
        self.scale(&-C::one())
    }
}

impl Polynomial {
    /// Parses text such as `"1/2*x1^2 - x2"` over `nvars` variables.
    pub fn parse(text: &str, nvars: usize) -> Result<Polynomial> {
        Parser { chars: text.chars().collect(), pos: 0, nvars, source: text }.polynomial()
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    nvars: usize,
    source: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, self.source))
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

    fn digits(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn polynomial(&mut self) -> Result<Polynomial> {
        let mut out = Polynomial::zero(self.nvars);
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    1
                }
                Some('-') => {
                    self.pos += 1;
                    -1
                }
                None if first => return Err(self.err("empty polynomial")),
                None => break,
                Some(_) if first => 1,
                Some(_) => return Err(self.err("expected '+' or '-'")),
            };
            first = false;
            let mut sign = sign;
            while let Some(s @ ('+' | '-')) = self.peek() {
                self.pos += 1;
                if s == '-' {
                    sign = -sign;
                }
            }
            let (m, c) = self.term()?;
            let c = if sign < 0 { -c } else { c };
            out.add_term(m, c);
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<(Monomial, Rational)> {
        let mut coeff = Rational::from_integer(1.into());
        let mut exps = vec![0u32; self.nvars];
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let mut lit = self.digits();
                    if self.peek() == Some('/') {
                        self.pos += 1;
                        let q = self.digits();
                        if q.is_empty() {
                            return Err(self.err("missing denominator"));
                        }
                        lit = format!("{lit}/{q}");
                    }
                    coeff *= parse_rational(&lit)?;
                }
                Some('x') => {
                    self.pos += 1;
                    let idx = self.digits();
                    let idx: usize = idx.parse().map_err(|_| self.err("expected variable index"))?;
                    if idx == 0 || idx > self.nvars {
                        return Err(self.err(&format!("variable x{idx} out of range 1..={}", self.nvars)));
                    }
                    let mut e = 1u32;
                    if self.peek() == Some('^') {
                        self.pos += 1;
                        e = self.digits().parse().map_err(|_| self.err("expected exponent"))?;
                    }
                    exps[idx - 1] += e;
                }
                _ => return Err(self.err("expected a number or variable")),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((Monomial(exps), coeff))
    }
}
