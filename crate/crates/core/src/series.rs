//! Truncated exponential generating functions in `t` whose coefficients are
//! [`MultiPoly`] values.
//!
//! `coeffs[k]` is the coefficient of `t^k / k!`. A series of order `T` stores
//! exactly `T + 1` coefficients, all of them exact; binary operations truncate
//! to the smaller order of their operands.

use std::ops::{Add, Sub};

use crate::error::{Error, Result};
use crate::poly::MultiPoly;
use crate::rational::{binomial, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<MultiPoly>,
}

impl Series {
    /// `coeffs` must be non-empty; its length fixes the order.
    pub fn from_coeffs(coeffs: Vec<MultiPoly>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        Series { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Series {
            coeffs: vec![MultiPoly::zero(); order + 1],
        }
    }

    pub fn constant(c: MultiPoly, order: usize) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Series::constant(MultiPoly::one(), order)
    }

    /// The series `t` (EGF coefficients `0, 1, 0, ...`).
    pub fn t(order: usize) -> Self {
        let mut s = Series::zero(order);
        if order >= 1 {
            s.coeffs[1] = MultiPoly::one();
        }
        s
    }

    /// Builds coefficients `0..=order` from a closure.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> MultiPoly) -> Self {
        Series {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &MultiPoly {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Series {
        Series {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    pub fn scale(&self, c: &MultiPoly) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn scale_rational(&self, c: &Rational) -> Series {
        Series {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// EGF product: `(fg)_n = Σ_k C(n,k) f_k g_{n-k}`.
    pub fn mul(&self, other: &Series) -> Series {
        let order = self.order().min(other.order());
        Series::from_fn(order, |n| {
            (0..=n)
                .filter(|&k| !self.coeffs[k].is_zero() && !other.coeffs[n - k].is_zero())
                .map(|k| {
                    (&self.coeffs[k] * &other.coeffs[n - k]).scale(&binom(n, k))
                })
                .sum()
        })
    }

    pub fn pow(&self, k: u32) -> Series {
        (0..k).fold(Series::one(self.order()), |acc, _| acc.mul(self))
    }

    /// `exp(f)` for `f` with zero constant term, from `g' = f' g`, `g_0 = 1`:
    /// `g_{n+1} = Σ_{i=0}^{n} C(n,i) f_{i+1} g_{n-i}`.
    pub fn exp(&self) -> Result<Series> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let order = self.order();
        let mut g: Vec<MultiPoly> = Vec::with_capacity(order + 1);
        g.push(MultiPoly::one());
        for n in 0..order {
            let next = (0..=n)
                .filter(|&i| !self.coeffs[i + 1].is_zero())
                .map(|i| (&self.coeffs[i + 1] * &g[n - i]).scale(&binom(n, i)))
                .sum();
            g.push(next);
        }
        Ok(Series { coeffs: g })
    }

    /// d/dt: shifts EGF coefficients down by one, order drops by one.
    pub fn derivative(&self) -> Result<Series> {
        if self.order() == 0 {
            return Err(Error::OrderZeroDerivative);
        }
        Ok(Series {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }
}

fn binom(n: usize, k: usize) -> Rational {
    Rational::from_integer(binomial(n as u32, k as u32))
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        Series::from_fn(order, |k| &self.coeffs[k] + &rhs.coeffs[k])
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        Series::from_fn(order, |k| &self.coeffs[k] - &rhs.coeffs[k])
    }
}

/// `k!` as a rational, for the `1/k!` normalisations of the generating
/// functions.
pub(crate) fn factorial_rational(k: u32) -> Rational {
    Rational::from_integer(crate::rational::factorial(k))
}
