//! Normal-ordered single-mode boson operators.
//!
//! A [`NormalForm`] is a finite sum `Σ c_ij (a†)^i a^j` with polynomial
//! coefficients in `λ` and `x`. All creators stand to the left of all
//! annihilators, which makes the representation canonical: two operator
//! expressions are equal exactly when their normal forms compare equal.
//!
//! Products are reordered with the closed form of `[a, a†] = 1`,
//!
//! ```text
//! a^j (a†)^m = Σ_{s=0}^{min(j,m)} s! C(j,s) C(m,s) (a†)^{m-s} a^{j-s}
//! ```
//!
//! applied once per pair of words.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;
use serde::Serialize;

use crate::combinatorics::StirlingTable;
use crate::error::{Error, Result};
use crate::poly::{Assignment, MultiPoly, PolyJson};
use crate::rational::{binomial, factorial, falling_factorial_int, Rational};

/// Exponents `(i, j)` of the word `(a†)^i a^j`.
pub type Word = (u32, u32);

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalForm {
    terms: BTreeMap<Word, MultiPoly>,
}

impl NormalForm {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The identity operator, word `(0, 0)`.
    pub fn identity() -> Self {
        Self::scalar(MultiPoly::one())
    }

    pub fn scalar(c: MultiPoly) -> Self {
        Self::word(0, 0, c)
    }

    /// `a`.
    pub fn annihilator() -> Self {
        Self::word(0, 1, MultiPoly::one())
    }

    /// `a†`.
    pub fn creator() -> Self {
        Self::word(1, 0, MultiPoly::one())
    }

    /// `N = a† a`.
    pub fn number() -> Self {
        Self::word(1, 1, MultiPoly::one())
    }

    /// `c (a†)^i a^j`.
    pub fn word(i: u32, j: u32, c: MultiPoly) -> Self {
        let mut nf = NormalForm::zero();
        nf.add_term((i, j), c);
        nf
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, MultiPoly)>>(iter: I) -> Self {
        let mut nf = NormalForm::zero();
        for (w, c) in iter {
            nf.add_term(w, c);
        }
        nf
    }

    fn add_term(&mut self, w: Word, c: MultiPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, i: u32, j: u32) -> MultiPoly {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(|(i, j)| i == j)
    }

    pub fn scale(&self, c: &MultiPoly) -> NormalForm {
        NormalForm::from_terms(self.terms.iter().map(|(w, v)| (*w, v * c)))
    }

    pub fn substitute(&self, assign: &Assignment) -> NormalForm {
        NormalForm::from_terms(self.terms.iter().map(|(w, c)| (*w, c.substitute(assign))))
    }

    /// Normal form of the operator product `self · other`.
    pub fn mul(&self, other: &NormalForm) -> NormalForm {
        let mut out = NormalForm::zero();
        for (&(i, j), c) in &self.terms {
            for (&(m, n), d) in &other.terms {
                let cd = c * d;
                for s in 0..=j.min(m) {
                    let weight = factorial(s) * binomial(j, s) * binomial(m, s);
                    out.add_term(
                        (i + m - s, j - s + n),
                        cd.scale(&Rational::from_integer(weight)),
                    );
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> NormalForm {
        (0..k).fold(NormalForm::identity(), |acc, _| acc.mul(self))
    }

    /// `f (f - step) (f - 2 step) ... (f - (k-1) step)`; the identity for
    /// `k = 0`.
    pub fn degenerate_power(&self, k: u32, step: &MultiPoly) -> NormalForm {
        let mut acc = NormalForm::identity();
        let mut factor = self.clone();
        let shift = NormalForm::scalar(step.clone());
        for _ in 0..k {
            acc = acc.mul(&factor);
            factor = &factor - &shift;
        }
        acc
    }

    /// Eigenvalue on the number state `|m⟩`, using `(a†)^l a^l |m⟩ = (m)_l |m⟩`.
    pub fn apply_number_state(&self, m: u64) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero();
        for (&(i, j), c) in &self.terms {
            if i != j {
                return Err(Error::OffDiagonal { i, j });
            }
            out += &c.scale(&Rational::from_integer(falling_factorial_int(m, i)));
        }
        Ok(out)
    }

    /// Text form using the expression grammar (`ad`, `a`, `lambda`, explicit
    /// `*`), so that it parses back to the same operator. Fails if a
    /// coefficient mentions `x`, which the grammar has no name for.
    pub fn to_expr_string(&self) -> Result<String> {
        if self.terms.values().any(MultiPoly::contains_x) {
            return Err(Error::XInCoefficient);
        }
        Ok(self.render(WordStyle::Grammar))
    }

    fn render(&self, style: WordStyle) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (&(i, j), c)) in self.terms.iter().rev().enumerate() {
            let word = style.word(i, j);
            let (negative, coeff) = match single_term_sign(c) {
                Some(true) => (true, (-c).render_with(style.lambda(), "x")),
                Some(false) => (false, c.render_with(style.lambda(), "x")),
                None => (false, format!("({})", c.render_with(style.lambda(), "x"))),
            };
            match (idx, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let term = match (word.is_empty(), coeff.as_str()) {
                (true, _) => coeff,
                (false, "1") => word,
                (false, _) => format!("{coeff}{}{word}", style.separator()),
            };
            out.push_str(&term);
        }
        out
    }

    pub fn to_json(&self) -> NormalFormJson {
        NormalFormJson {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| WordJson {
                    i,
                    j,
                    coeff: c.to_json(),
                })
                .collect(),
        }
    }
}

/// `Some(is_negative)` for single-term coefficients, `None` when the
/// coefficient needs parentheses.
fn single_term_sign(c: &MultiPoly) -> Option<bool> {
    match c.num_terms() {
        1 => c.terms().next().map(|(_, v)| v.is_negative()),
        _ => None,
    }
}

#[derive(Clone, Copy)]
enum WordStyle {
    Plain,
    Grammar,
}

impl WordStyle {
    fn lambda(self) -> &'static str {
        match self {
            WordStyle::Plain => "L",
            WordStyle::Grammar => "lambda",
        }
    }

    fn separator(self) -> &'static str {
        match self {
            WordStyle::Plain => " ",
            WordStyle::Grammar => "*",
        }
    }

    fn word(self, i: u32, j: u32) -> String {
        let part = |name: &str, e: u32| match e {
            0 => None,
            1 => Some(name.to_string()),
            _ => Some(format!("{name}^{e}")),
        };
        [part("ad", i), part("a", j)]
            .into_iter()
            .flatten()
            .collect::<Vec<_>>()
            .join(self.separator())
    }
}

/// Plain rendering, e.g. `ad^2 a^2 + (1 - L) ad a`; words in descending
/// order.
impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(WordStyle::Plain))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalFormJson {
    pub terms: Vec<WordJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WordJson {
    pub i: u32,
    pub j: u32,
    pub coeff: PolyJson,
}

/// Compares the normal form of `(a†a)_{k,λ}` with the table row: word
/// `(l, l)` must carry `S₂,λ(k, l)` and no off-diagonal word may appear.
pub fn verify_normal_ordering_theorem(k: usize, table: &StirlingTable) -> bool {
    let nf = NormalForm::number().degenerate_power(k as u32, &MultiPoly::lambda());
    let expected = NormalForm::from_terms(
        (0..=k).map(|l| ((l as u32, l as u32), table.get(k, l))),
    );
    nf == expected
}

impl Add for &NormalForm {
    type Output = NormalForm;
    fn add(self, rhs: &NormalForm) -> NormalForm {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, c.clone());
        }
        out
    }
}

impl Add for NormalForm {
    type Output = NormalForm;
    fn add(self, rhs: NormalForm) -> NormalForm {
        &self + &rhs
    }
}

impl Sub for &NormalForm {
    type Output = NormalForm;
    fn sub(self, rhs: &NormalForm) -> NormalForm {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(*w, -c);
        }
        out
    }
}

impl Neg for &NormalForm {
    type Output = NormalForm;
    fn neg(self) -> NormalForm {
        NormalForm::from_terms(self.terms.iter().map(|(w, c)| (*w, -c)))
    }
}

impl Mul for &NormalForm {
    type Output = NormalForm;
    fn mul(self, rhs: &NormalForm) -> NormalForm {
        NormalForm::mul(self, rhs)
    }
}
