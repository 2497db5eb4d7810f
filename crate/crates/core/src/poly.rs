//! Sparse polynomials with rational coefficients in the two indeterminates
//! `λ` (the degeneracy parameter) and `x`.
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], so iteration order is
//! ascending in `(λ-degree, x-degree)` and every rendering is deterministic.
//! Zero coefficients are never stored.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::rational::{fraction_string, to_f64, Rational};

/// Exponent vector over `(λ, x)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub lambda: u32,
    pub x: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { lambda: 0, x: 0 };

    pub fn new(lambda: u32, x: u32) -> Self {
        Monomial { lambda, x }
    }

    fn mul(self, other: Monomial) -> Monomial {
        Monomial {
            lambda: self.lambda + other.lambda,
            x: self.x + other.x,
        }
    }
}

/// Values for a subset of the indeterminates.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Assignment {
    pub lambda: Option<Rational>,
    pub x: Option<Rational>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_lambda(mut self, value: Rational) -> Self {
        self.lambda = Some(value);
        self
    }

    pub fn with_x(mut self, value: Rational) -> Self {
        self.x = Some(value);
        self
    }
}

/// Result of [`MultiPoly::eval`]: a plain scalar once no indeterminate is
/// left, otherwise the partially evaluated polynomial.
#[derive(Clone, Debug, PartialEq)]
pub enum Evaluated {
    Scalar(Rational),
    Poly(MultiPoly),
}

impl Evaluated {
    pub fn into_poly(self) -> MultiPoly {
        match self {
            Evaluated::Scalar(c) => MultiPoly::constant(c),
            Evaluated::Poly(p) => p,
        }
    }

    pub fn scalar(&self) -> Option<&Rational> {
        match self {
            Evaluated::Scalar(c) => Some(c),
            Evaluated::Poly(_) => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, Monomial::ONE)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Rational::from_integer(n.into()))
    }

    /// The indeterminate `λ`.
    pub fn lambda() -> Self {
        Self::monomial(Rational::one(), Monomial::new(1, 0))
    }

    /// The indeterminate `x`.
    pub fn x() -> Self {
        Self::monomial(Rational::one(), Monomial::new(0, 1))
    }

    pub fn monomial(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { terms }
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(iter: I) -> Self {
        let mut p = MultiPoly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: Monomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// `Some(c)` when the polynomial is the constant `c` (including 0).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn contains_lambda(&self) -> bool {
        self.terms.keys().any(|m| m.lambda > 0)
    }

    pub fn contains_x(&self) -> bool {
        self.terms.keys().any(|m| m.x > 0)
    }

    /// Highest power of `x`; 0 for constants and the zero polynomial.
    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|m| m.x).max().unwrap_or(0)
    }

    pub fn degree_lambda(&self) -> u32 {
        self.terms.keys().map(|m| m.lambda).max().unwrap_or(0)
    }

    /// Coefficient of `x^k`, a polynomial in `λ` alone.
    pub fn coeff_of_x(&self, k: u32) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.x == k)
                .map(|(m, c)| (Monomial::new(m.lambda, 0), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// d/dx.
    pub fn derivative_x(&self) -> MultiPoly {
        MultiPoly::from_terms(self.terms.iter().filter(|(m, _)| m.x > 0).map(|(m, c)| {
            (
                Monomial::new(m.lambda, m.x - 1),
                c * Rational::from_integer(m.x.into()),
            )
        }))
    }

    /// Exact substitution of the assigned indeterminates; the others stay
    /// symbolic.
    pub fn substitute(&self, assign: &Assignment) -> MultiPoly {
        let mut lambda_powers = PowerCache::new(assign.lambda.as_ref());
        let mut x_powers = PowerCache::new(assign.x.as_ref());
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut c = c.clone();
            let mut rest = *m;
            if let Some(v) = lambda_powers.get(m.lambda) {
                c *= v;
                rest.lambda = 0;
            }
            if let Some(v) = x_powers.get(m.x) {
                c *= v;
                rest.x = 0;
            }
            out.add_term(rest, c);
        }
        out
    }

    pub fn eval(&self, assign: &Assignment) -> Evaluated {
        let p = self.substitute(assign);
        match p.as_constant() {
            Some(c) => Evaluated::Scalar(c),
            None => Evaluated::Poly(p),
        }
    }

    /// Floating-point evaluation at `(λ, x)`.
    pub fn eval_f64(&self, lambda: f64, x: f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| to_f64(c) * lambda.powi(m.lambda as i32) * x.powi(m.x as i32))
            .sum()
    }

    /// Canonical text with caller-chosen names for the indeterminates, e.g.
    /// `1 - 3*L + 2*L^2`. Terms appear in ascending `(λ, x)` order.
    pub fn render_with(&self, lambda_name: &str, x_name: &str) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (idx, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if *m == Monomial::ONE || !abs.is_one() {
                factors.push(abs.to_string());
            }
            for (name, e) in [(lambda_name, m.lambda), (x_name, m.x)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermJson {
                    coeff: fraction_string(c),
                    lambda: m.lambda,
                    x: m.x,
                })
                .collect(),
        }
    }
}

/// Wire form `{"terms":[{"coeff":"<num>/<den>","lambda":i,"x":j}]}`.
#[derive(Clone, Debug, Serialize)]
pub struct PolyJson {
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TermJson {
    pub coeff: String,
    pub lambda: u32,
    pub x: u32,
}

struct PowerCache<'a> {
    base: Option<&'a Rational>,
    powers: Vec<Rational>,
}

impl<'a> PowerCache<'a> {
    fn new(base: Option<&'a Rational>) -> Self {
        PowerCache {
            base,
            powers: vec![Rational::one()],
        }
    }

    fn get(&mut self, e: u32) -> Option<&Rational> {
        let base = self.base?;
        while self.powers.len() <= e as usize {
            let next = self.powers.last().unwrap() * base;
            self.powers.push(next);
        }
        Some(&self.powers[e as usize])
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with("L", "x"))
    }
}

impl From<Rational> for MultiPoly {
    fn from(c: Rational) -> Self {
        MultiPoly::constant(c)
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(*mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl AddAssign<&MultiPoly> for MultiPoly {
    fn add_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl SubAssign<&MultiPoly> for MultiPoly {
    fn sub_assign(&mut self, rhs: &MultiPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c);
        }
    }
}

macro_rules! forward_owned {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<MultiPoly> for &'a MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                self.$method(&rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl std::iter::Sum for MultiPoly {
    fn sum<I: Iterator<Item = MultiPoly>>(iter: I) -> MultiPoly {
        iter.fold(MultiPoly::zero(), |mut acc, p| {
            acc += &p;
            acc
        })
    }
}
