//! Degenerate falling factorials, degenerate Stirling numbers of the second
//! kind, degenerate Bell polynomials and the degenerate Euler operator.
//!
//! The triangular recurrence
//!
//! ```text
//! S(n+1, k) = S(n, k-1) + (k - nλ) S(n, k),   S(0, 0) = 1
//! ```
//!
//! is the only constructor for the Stirling table. The connection-coefficient
//! identity and the column generating functions are exposed as checks that a
//! table must pass, never as alternative ways to build one.

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Assignment, MultiPoly, PolyJson};
use crate::rational::{binomial, falling_factorial_int, int, Rational};
use crate::series::{factorial_rational, Series};

/// `base (base - step) ... (base - (n-1) step)`; 1 for `n = 0`.
pub fn falling_factorial(n: u32, base: &MultiPoly, step: &MultiPoly) -> MultiPoly {
    let mut acc = MultiPoly::one();
    let mut factor = base.clone();
    for _ in 0..n {
        acc = &acc * &factor;
        factor -= step;
    }
    acc
}

/// `(x)_{n,λ}` with `x` and `λ` both symbolic.
pub fn degenerate_falling_factorial(n: u32) -> MultiPoly {
    falling_factorial(n, &MultiPoly::x(), &MultiPoly::lambda())
}

/// `(x)_n`, the ordinary falling factorial in `x`.
pub fn ordinary_falling_factorial(n: u32) -> MultiPoly {
    falling_factorial(n, &MultiPoly::x(), &MultiPoly::one())
}

/// The degenerate exponential `e_λ^{base}(t)`, whose EGF coefficients are
/// `(base)_{k,λ}`.
pub fn degenerate_exp(base: &MultiPoly, order: usize) -> Series {
    let lambda = MultiPoly::lambda();
    let mut coeffs = Vec::with_capacity(order + 1);
    let mut acc = MultiPoly::one();
    let mut factor = base.clone();
    coeffs.push(acc.clone());
    for _ in 0..order {
        acc = &acc * &factor;
        factor -= &lambda;
        coeffs.push(acc.clone());
    }
    Series::from_coeffs(coeffs)
}

/// Dense triangle of degenerate Stirling numbers `S₂,λ(n, k)`,
/// `0 ≤ k ≤ n ≤ max_n`, each entry a polynomial in `λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct StirlingTable {
    rows: Vec<Vec<MultiPoly>>,
}

impl StirlingTable {
    /// Runs the triangular recurrence up to row `max_n`.
    pub fn new(max_n: usize) -> Self {
        let lambda = MultiPoly::lambda();
        let mut rows: Vec<Vec<MultiPoly>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![MultiPoly::one()]);
        for n in 0..max_n {
            let prev = &rows[n];
            let n_lambda = lambda.scale(&int(n as i64));
            let next: Vec<MultiPoly> = (0..=n + 1)
                .map(|k| {
                    let mut entry = if k >= 1 {
                        prev[k - 1].clone()
                    } else {
                        MultiPoly::zero()
                    };
                    if k <= n && !prev[k].is_zero() {
                        let weight = MultiPoly::from_int(k as i64) - &n_lambda;
                        entry += &(&weight * &prev[k]);
                    }
                    entry
                })
                .collect();
            rows.push(next);
        }
        StirlingTable { rows }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `S₂,λ(n, k)`, zero outside the triangle. Panics if `n > max_n`.
    pub fn get(&self, n: usize, k: usize) -> MultiPoly {
        self.rows[n].get(k).cloned().unwrap_or_default()
    }

    pub fn row(&self, n: usize) -> &[MultiPoly] {
        &self.rows[n]
    }

    /// Replaces one entry. Only useful for feeding deliberately corrupted
    /// tables to the verification routines.
    pub fn with_entry(mut self, n: usize, k: usize, value: MultiPoly) -> Self {
        self.rows[n][k] = value;
        self
    }

    /// Entrywise substitution, e.g. `λ := 0` for the classical triangle.
    pub fn substitute(&self, assign: &Assignment) -> StirlingTable {
        StirlingTable {
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|p| p.substitute(assign)).collect())
                .collect(),
        }
    }

    /// CSV dump: header `n,0,1,...,max_n`; row `n` fills columns `0..=n` and
    /// leaves the rest empty. Cells use the canonical `L` rendering.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let width = self.max_n() + 2;
        let mut header = vec!["n".to_string()];
        header.extend((0..=self.max_n()).map(|k| k.to_string()));
        w.write_record(&header).expect("in-memory csv");
        for (n, row) in self.rows.iter().enumerate() {
            let mut record = Vec::with_capacity(width);
            record.push(n.to_string());
            record.extend(row.iter().map(|p| p.to_string()));
            record.resize(width, String::new());
            w.write_record(&record).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 cells")
    }

    pub fn to_json(&self) -> StirlingJson {
        StirlingJson {
            max_n: self.max_n(),
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(MultiPoly::to_json).collect())
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StirlingJson {
    pub max_n: usize,
    pub rows: Vec<Vec<PolyJson>>,
}

/// Checks `(x)_{n,λ} = Σ_k S₂,λ(n,k) (x)_k` as an exact identity in `λ` and
/// `x`.
pub fn verify_defining_identity(table: &StirlingTable, n: usize) -> bool {
    let expanded: MultiPoly = (0..=n)
        .map(|k| &table.get(n, k) * &ordinary_falling_factorial(k as u32))
        .sum();
    expanded == degenerate_falling_factorial(n as u32)
}

/// `(e_λ(t) - 1)^k / k!` to order `order`.
pub fn stirling_column_series(k: u32, order: usize) -> Series {
    let shifted = &degenerate_exp(&MultiPoly::one(), order) - &Series::one(order);
    shifted
        .pow(k)
        .scale_rational(&(Rational::one() / factorial_rational(k)))
}

/// Degenerate Bell polynomial `φ_{n,λ}(x) = Σ_k S₂,λ(n,k) x^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct BellPoly {
    pub n: usize,
    pub poly: MultiPoly,
}

impl BellPoly {
    pub fn from_table(table: &StirlingTable, n: usize) -> Self {
        let x = MultiPoly::x();
        let poly = table
            .row(n)
            .iter()
            .enumerate()
            .map(|(k, s)| s * &x.pow(k as u32))
            .sum();
        BellPoly { n, poly }
    }

    /// The degenerate Bell number `φ_{n,λ} = φ_{n,λ}(1)`, a polynomial in `λ`.
    pub fn number(&self) -> MultiPoly {
        self.poly.substitute(&Assignment::new().with_x(Rational::one()))
    }
}

pub fn bell_poly(n: usize) -> BellPoly {
    BellPoly::from_table(&StirlingTable::new(n), n)
}

/// `φ_0 .. φ_max_n` sharing one table.
pub fn bell_polys(max_n: usize) -> Vec<BellPoly> {
    let table = StirlingTable::new(max_n);
    (0..=max_n).map(|n| BellPoly::from_table(&table, n)).collect()
}

/// Given `φ_0, ..., φ_k`, returns `x Σ_l C(k,l) (1-λ)_{k-l,λ} φ_l`, which
/// equals `φ_{k+1}`.
pub fn bell_recurrence_step(bells: &[MultiPoly]) -> Result<MultiPoly> {
    let k = bells
        .len()
        .checked_sub(1)
        .ok_or_else(|| Error::InvalidArgument("need at least φ_0".into()))?;
    let one_minus_lambda = MultiPoly::one() - MultiPoly::lambda();
    let lambda = MultiPoly::lambda();
    let sum: MultiPoly = bells
        .iter()
        .enumerate()
        .map(|(l, phi)| {
            let weight = falling_factorial((k - l) as u32, &one_minus_lambda, &lambda)
                .scale(&Rational::from_integer(binomial(k as u32, l as u32)));
            &weight * phi
        })
        .sum();
    Ok(&MultiPoly::x() * &sum)
}

/// Both sides of the degenerate Euler operator identity applied to `p(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerEvaluation {
    /// `(xD)(xD - λ)...(xD - (n-1)λ) p`, using `xD x^m = m x^m`.
    pub operator_side: MultiPoly,
    /// `Σ_k S₂,λ(n,k) x^k p^{(k)}(x)`.
    pub stirling_side: MultiPoly,
}

impl EulerEvaluation {
    pub fn agree(&self) -> bool {
        self.operator_side == self.stirling_side
    }
}

/// Evaluates `(x d/dx)_{n,λ} p` two ways. `n = 0` is the identity.
pub fn euler_operator_degenerate(p: &MultiPoly, n: u32) -> Result<EulerEvaluation> {
    if p.contains_lambda() {
        return Err(Error::LambdaInOperand);
    }
    let lambda = MultiPoly::lambda();
    let operator_side = p
        .terms()
        .map(|(m, c)| {
            let eigen = falling_factorial(n, &MultiPoly::from_int(m.x as i64), &lambda);
            eigen.scale(c) * MultiPoly::x().pow(m.x)
        })
        .sum();

    let table = StirlingTable::new(n as usize);
    let x = MultiPoly::x();
    let mut derivative = p.clone();
    let mut stirling_side = MultiPoly::zero();
    for k in 0..=n as usize {
        let s = table.get(n as usize, k);
        if !s.is_zero() {
            stirling_side += &(s * x.pow(k as u32) * &derivative);
        }
        derivative = derivative.derivative_x();
    }
    Ok(EulerEvaluation {
        operator_side,
        stirling_side,
    })
}

/// `Σ_l S₂,λ(k,l) (m)_l`, the eigenvalue side of the integer-point identity.
pub fn integer_point_expansion(table: &StirlingTable, k: usize, m: u64) -> MultiPoly {
    (0..=k)
        .map(|l| {
            table
                .get(k, l)
                .scale(&Rational::from_integer(falling_factorial_int(m, l as u32)))
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam() -> MultiPoly {
        MultiPoly::lambda()
    }

    fn one_minus(c: i64) -> MultiPoly {
        MultiPoly::one() - lam().scale(&int(c))
    }

    /// Independent closed form `S(n,k) = (1/k!) Σ_j (-1)^{k-j} C(k,j) (j)_{n,λ}`.
    fn stirling_explicit(n: u32, k: u32) -> MultiPoly {
        let sum: MultiPoly = (0..=k)
            .map(|j| {
                let sign = if (k - j).is_multiple_of(2) { 1 } else { -1 };
                falling_factorial(n, &MultiPoly::from_int(j as i64), &lam())
                    .scale(&(Rational::from_integer(binomial(k, j)) * int(sign)))
            })
            .sum();
        sum.scale(&(Rational::one() / factorial_rational(k)))
    }

    /// Number of partitions of an n-set into k nonempty blocks, by enumerating
    /// restricted growth strings.
    fn partitions_brute_force(n: usize, k: usize) -> u64 {
        fn go(pos: usize, n: usize, blocks: usize, k: usize) -> u64 {
            if pos == n {
                return u64::from(blocks == k);
            }
            (0..=blocks)
                .filter(|&b| b < k)
                .map(|b| go(pos + 1, n, blocks.max(b + 1), k))
                .sum()
        }
        if n == 0 {
            return u64::from(k == 0);
        }
        go(0, n, 0, k)
    }

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(
            falling_factorial(0, &MultiPoly::x(), &lam()),
            MultiPoly::one()
        );
        let x = MultiPoly::x();
        assert_eq!(degenerate_falling_factorial(2), &x * &x - &x * &lam());
        assert_eq!(
            ordinary_falling_factorial(3),
            x.pow(3) - x.pow(2).scale(&int(3)) + x.scale(&int(2))
        );
    }

    #[test]
    fn small_table_entries() {
        let t = StirlingTable::new(3);
        assert_eq!(t.get(2, 1), one_minus(1));
        assert_eq!(t.get(2, 2), MultiPoly::one());
        assert_eq!(t.get(3, 2), one_minus(1).scale(&int(3)));
        assert_eq!(t.get(3, 1), one_minus(1) * one_minus(2));
        for n in 0..=3 {
            assert!(t.get(n, n).is_one());
        }
        for n in 1..=3 {
            assert!(t.get(n, 0).is_zero());
        }
    }

    #[test]
    fn table_matches_explicit_sum() {
        let t = StirlingTable::new(9);
        for n in 0..=9u32 {
            for k in 0..=n {
                assert_eq!(t.get(n as usize, k as usize), stirling_explicit(n, k), "S({n},{k})");
            }
        }
    }

    #[test]
    fn classical_specialization_counts_partitions() {
        let t = StirlingTable::new(8).substitute(&Assignment::new().with_lambda(int(0)));
        for n in 0..=8 {
            for k in 0..=n {
                let brute = partitions_brute_force(n, k);
                assert_eq!(t.get(n, k), MultiPoly::from_int(brute as i64), "S2({n},{k})");
            }
        }
        assert_eq!(
            t.row(3),
            &[0, 1, 3, 1].map(MultiPoly::from_int)[..]
        );
    }

    #[test]
    fn defining_identity_and_mutation() {
        let t = StirlingTable::new(4);
        assert!(verify_defining_identity(&t, 0));
        assert!(verify_defining_identity(&t, 2));
        let bad = t.with_entry(2, 1, MultiPoly::one() + lam());
        assert!(!verify_defining_identity(&bad, 2));
    }

    #[test]
    fn column_series_examples() {
        assert_eq!(stirling_column_series(0, 3), Series::one(3));
        let c1 = stirling_column_series(1, 3);
        assert_eq!(
            c1.coeffs(),
            &[
                MultiPoly::zero(),
                MultiPoly::one(),
                one_minus(1),
                one_minus(1) * one_minus(2)
            ][..]
        );
        assert_eq!(stirling_column_series(2, 3).coeff(3), &one_minus(1).scale(&int(3)));
    }

    #[test]
    fn bell_examples() {
        assert_eq!(bell_poly(0).poly, MultiPoly::one());
        let x = MultiPoly::x();
        let b2 = bell_poly(2);
        assert_eq!(b2.poly, &x * &x + one_minus(1) * &x);
        assert_eq!(b2.number(), MultiPoly::from_int(2) - lam());
        let b3 = bell_poly(3)
            .number()
            .substitute(&Assignment::new().with_lambda(int(0)));
        let brute: i64 = (0..=3).map(|k| partitions_brute_force(3, k) as i64).sum();
        assert_eq!(brute, 5);
        assert_eq!(b3, MultiPoly::from_int(brute));
    }

    #[test]
    fn bell_recurrence_examples() {
        let bells: Vec<MultiPoly> = bell_polys(3).into_iter().map(|b| b.poly).collect();
        assert_eq!(bell_recurrence_step(&bells[..1]).unwrap(), MultiPoly::x());
        let at_one = Assignment::new().with_x(int(1));
        assert_eq!(
            bell_recurrence_step(&bells[..2]).unwrap().substitute(&at_one),
            MultiPoly::from_int(2) - lam()
        );
        let classical = Assignment::new().with_x(int(1)).with_lambda(int(0));
        assert_eq!(
            bell_recurrence_step(&bells[..3]).unwrap().substitute(&classical),
            MultiPoly::from_int(5)
        );
        assert!(bell_recurrence_step(&[]).is_err());
    }

    #[test]
    fn euler_operator_examples() {
        let x = MultiPoly::x();
        let e = euler_operator_degenerate(&x.pow(3), 2).unwrap();
        assert!(e.agree());
        assert_eq!(
            e.operator_side,
            (MultiPoly::from_int(9) - lam().scale(&int(3))) * x.pow(3)
        );
        let e = euler_operator_degenerate(&MultiPoly::one(), 1).unwrap();
        assert!(e.agree());
        assert!(e.operator_side.is_zero());
        let p = &x + &x.pow(2);
        let e = euler_operator_degenerate(&p, 1).unwrap();
        assert_eq!(e.stirling_side, &x + &x.pow(2).scale(&int(2)));
        assert!(e.agree());
        let e = euler_operator_degenerate(&p, 0).unwrap();
        assert_eq!(e.operator_side, p);
        assert!(e.agree());
        assert_eq!(
            euler_operator_degenerate(&lam(), 1),
            Err(Error::LambdaInOperand)
        );
    }

    #[test]
    fn integer_points() {
        let t = StirlingTable::new(4);
        assert_eq!(
            integer_point_expansion(&t, 2, 3),
            MultiPoly::from_int(9) - lam().scale(&int(3))
        );
        assert!(integer_point_expansion(&t, 3, 0).is_zero());
    }

    #[test]
    fn csv_layout() {
        let t = StirlingTable::new(2);
        assert_eq!(t.to_csv(), "n,0,1,2\n0,1,,\n1,0,1,\n2,0,1 - L,1\n");
    }
}
