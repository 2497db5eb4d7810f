//! Truncated Fock-space oracle.
//!
//! Everything here is double precision and deliberately independent of the
//! symbolic rewriting in [`crate::boson`]: operators are plain `D × D`
//! matrices with `A[m-1][m] = √m`, states are amplitude vectors, and the
//! comparisons only look at the part of a product that the cutoff cannot
//! reach.
//!
//! For a product of `L` generators at cutoff `D`, every entry whose row and
//! column are both `< D - L` equals the entry of the untruncated operator.
//! That square is the leakage-free block.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::One;
use serde::Serialize;

use crate::boson::NormalForm;
use crate::combinatorics::{bell_polys, degenerate_exp};
use crate::error::{Error, Result};
use crate::poly::{Assignment, MultiPoly};
use crate::rational::{from_f64, to_f64, Rational};
use crate::series::Series;

/// Largest acceptable `1 - ⟨z|z⟩` for a truncated coherent state.
pub const NORM_DEFICIT_TOL: f64 = 1e-12;

/// Largest acceptable tail of the occupation-number series in expectation
/// values.
pub const SERIES_TAIL_TOL: f64 = 1e-12;

/// Step cap for the adaptive Dobinski summation.
pub const MAX_DOBINSKI_TERMS: usize = 100_000;

const MAX_CUTOFF: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct FockMatrix {
    entries: DMatrix<Complex64>,
}

impl FockMatrix {
    pub fn identity(dim: usize) -> Self {
        FockMatrix {
            entries: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        FockMatrix {
            entries: DMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn mul(&self, other: &FockMatrix) -> FockMatrix {
        FockMatrix {
            entries: &self.entries * &other.entries,
        }
    }

    pub fn adjoint(&self) -> FockMatrix {
        FockMatrix {
            entries: self.entries.adjoint(),
        }
    }

    pub fn apply(&self, v: &FockVector) -> FockVector {
        FockVector {
            amplitudes: &self.entries * &v.amplitudes,
        }
    }

    /// `max |self[r][c] - other[r][c]|` over `r, c < block`.
    pub fn max_block_difference(&self, other: &FockMatrix, block: usize) -> f64 {
        let mut max = 0.0f64;
        for r in 0..block {
            for c in 0..block {
                max = max.max((self.entries[(r, c)] - other.entries[(r, c)]).norm());
            }
        }
        max
    }

    fn add_scaled(&mut self, other: &DMatrix<Complex64>, c: f64) {
        self.entries += other * Complex64::new(c, 0.0);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    amplitudes: DVector<Complex64>,
}

impl FockVector {
    /// `|m⟩` in a space of dimension `dim`; requires `m < dim`.
    pub fn number_state(m: usize, dim: usize) -> Result<Self> {
        if m >= dim {
            return Err(Error::InvalidArgument(format!(
                "number state |{m}⟩ does not fit cutoff {dim}"
            )));
        }
        let mut amplitudes = DVector::zeros(dim);
        amplitudes[m] = Complex64::one();
        Ok(FockVector { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitude(&self, n: usize) -> Complex64 {
        self.amplitudes[n]
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Annihilator and creator matrices at cutoff `dim`.
pub fn build_operators(dim: usize) -> Result<(FockMatrix, FockMatrix)> {
    if dim == 0 {
        return Err(Error::ZeroCutoff);
    }
    let mut a = DMatrix::zeros(dim, dim);
    for m in 1..dim {
        a[(m - 1, m)] = Complex64::new((m as f64).sqrt(), 0.0);
    }
    let a = FockMatrix { entries: a };
    let ad = a.adjoint();
    Ok((a, ad))
}

/// `Σ c_ij(λ) (A†)^i A^j` at cutoff `dim`. Coefficients may only depend on
/// `λ`.
pub fn matrix_of_normal_form(nf: &NormalForm, lambda: f64, dim: usize) -> Result<FockMatrix> {
    let (a, ad) = build_operators(dim)?;
    let mut a_pows = vec![FockMatrix::identity(dim)];
    let mut ad_pows = vec![FockMatrix::identity(dim)];
    let mut out = FockMatrix::zeros(dim);
    for (&(i, j), c) in nf.terms() {
        if c.contains_x() {
            return Err(Error::XInCoefficient);
        }
        while ad_pows.len() <= i as usize {
            let next = ad_pows.last().unwrap().mul(&ad);
            ad_pows.push(next);
        }
        while a_pows.len() <= j as usize {
            let next = a_pows.last().unwrap().mul(&a);
            a_pows.push(next);
        }
        let word = &ad_pows[i as usize].entries * &a_pows[j as usize].entries;
        out.add_scaled(&word, c.eval_f64(lambda, 0.0));
    }
    Ok(out)
}

/// One factor of an oracle word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Letter {
    /// `a`
    A,
    /// `a†`
    Ad,
    /// `a†a - λ`, the shifted number operator appearing in degenerate
    /// powers.
    ShiftedNumber,
}

impl Letter {
    /// How many raw generators the letter spends from the leakage budget.
    pub fn generators(self) -> usize {
        match self {
            Letter::A | Letter::Ad => 1,
            Letter::ShiftedNumber => 2,
        }
    }

    pub fn normal_form(self) -> NormalForm {
        match self {
            Letter::A => NormalForm::annihilator(),
            Letter::Ad => NormalForm::creator(),
            Letter::ShiftedNumber => {
                &NormalForm::number() - &NormalForm::scalar(MultiPoly::lambda())
            }
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Letter::A => "a",
            Letter::Ad => "ad",
            Letter::ShiftedNumber => "(N - lambda)",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub pass: bool,
    pub max_error: f64,
    pub block: usize,
}

/// Absolute tolerance of the matrix oracle.
pub const ORACLE_TOL: f64 = 1e-10;

/// Multiplies the raw matrices of `word` and compares them, on the
/// leakage-free block, with the matrix of the word's symbolic normal form.
pub fn oracle_check(word: &[Letter], lambda: &Rational, dim: usize) -> Result<OracleReport> {
    let length: usize = word.iter().map(|l| l.generators()).sum();
    if dim <= length {
        return Err(Error::NoLeakageFreeBlock { cutoff: dim, length });
    }
    let lambda_f = to_f64(lambda);
    let (a, ad) = build_operators(dim)?;
    let shifted = {
        let mut n = ad.mul(&a);
        n.add_scaled(&DMatrix::identity(dim, dim), -lambda_f);
        n
    };
    let raw = word.iter().fold(FockMatrix::identity(dim), |acc, l| {
        acc.mul(match l {
            Letter::A => &a,
            Letter::Ad => &ad,
            Letter::ShiftedNumber => &shifted,
        })
    });
    let nf = word
        .iter()
        .fold(NormalForm::identity(), |acc, l| acc.mul(&l.normal_form()))
        .substitute(&Assignment::new().with_lambda(lambda.clone()));
    let symbolic = matrix_of_normal_form(&nf, lambda_f, dim)?;
    let block = dim - length;
    let max_error = raw.max_block_difference(&symbolic, block);
    Ok(OracleReport {
        pass: max_error < ORACLE_TOL,
        max_error,
        block,
    })
}

/// Probability mass `e^{-r} r^n / n!` for `n` in `from..`, summed until it
/// stops contributing.
fn poisson_tail(r: f64, from: usize) -> f64 {
    let mut w = (-r).exp();
    let mut tail = 0.0;
    let mut n = 0usize;
    loop {
        if n >= from {
            tail += w;
            if n as f64 > r && w <= tail * 1e-17 {
                break;
            }
        }
        n += 1;
        w *= r / n as f64;
    }
    tail
}

/// `1 - ⟨z|z⟩` for the coherent state truncated to `dim` levels.
pub fn norm_deficit(z: Complex64, dim: usize) -> f64 {
    poisson_tail(z.norm_sqr(), dim)
}

/// Smallest cutoff whose truncated coherent state misses less than
/// [`NORM_DEFICIT_TOL`] of the norm.
pub fn coherent_cutoff(z: Complex64) -> usize {
    (1..MAX_CUTOFF)
        .find(|&d| norm_deficit(z, d) < NORM_DEFICIT_TOL)
        .unwrap_or(MAX_CUTOFF)
}

/// Amplitudes `e^{-|z|²/2} z^n / √(n!)`, phase fixed to 1.
pub fn coherent_state(z: Complex64, dim: usize) -> Result<FockVector> {
    if dim == 0 {
        return Err(Error::ZeroCutoff);
    }
    let deficit = norm_deficit(z, dim);
    if deficit >= NORM_DEFICIT_TOL {
        return Err(Error::TruncationInsufficient {
            what: "coherent-state norm deficit",
            cutoff: dim,
            bound: deficit,
        });
    }
    let mut amplitudes = DVector::zeros(dim);
    let mut amp = Complex64::new((-z.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..dim {
        if n > 0 {
            amp = amp * z / (n as f64).sqrt();
        }
        amplitudes[n] = amp;
    }
    Ok(FockVector { amplitudes })
}

/// Closed form `⟨x|y⟩ = exp(-(|x|² + |y|²)/2 + x̄ y)`.
pub fn coherent_overlap(x: Complex64, y: Complex64) -> Complex64 {
    (-(x.norm_sqr() + y.norm_sqr()) / 2.0 + x.conj() * y).exp()
}

/// The two numeric evaluations of `⟨z|(a†a)_{k,λ}|z⟩` next to the exact
/// value `φ_{k,λ}(|z|²)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expectation {
    /// `⟨z| M |z⟩` with `M` the matrix of the normal form.
    pub matrix_value: f64,
    /// `e^{-|z|²} Σ_{n<D} |z|^{2n} (n)_{k,λ} / n!`.
    pub series_value: f64,
    /// Exact Bell polynomial at `x = |z|²` (the double `|z|²` taken exactly).
    pub exact: f64,
    pub max_rel_error: f64,
}

/// Relative tolerance for [`expectation_degenerate_power`].
pub const EXPECTATION_REL_TOL: f64 = 1e-9;

impl Expectation {
    pub fn pass(&self) -> bool {
        self.max_rel_error < EXPECTATION_REL_TOL
    }
}

pub fn expectation_degenerate_power(
    z: Complex64,
    k: u32,
    lambda: &Rational,
    dim: usize,
) -> Result<Expectation> {
    let x = z.norm_sqr();
    let lambda_f = to_f64(lambda);
    let tail = dobinski_tail_bound(k, lambda_f, x, dim).unwrap_or(f64::INFINITY);
    if tail >= SERIES_TAIL_TOL {
        return Err(Error::TruncationInsufficient {
            what: "occupation-number series tail",
            cutoff: dim,
            bound: tail,
        });
    }
    let state = coherent_state(z, dim)?;
    let nf = NormalForm::number()
        .degenerate_power(k, &MultiPoly::lambda())
        .substitute(&Assignment::new().with_lambda(lambda.clone()));
    let m = matrix_of_normal_form(&nf, lambda_f, dim)?;
    let matrix_value = state.inner(&m.apply(&state)).re;

    let mut weight = (-x).exp();
    let mut series = NeumaierSum::default();
    for n in 0..dim {
        if n > 0 {
            weight *= x / n as f64;
        }
        series.add(weight * degenerate_falling_f64(n as f64, k, lambda_f));
    }
    let series_value = series.value();

    let x_exact = from_f64(x).expect("finite |z|^2");
    let bell = &bell_polys(k as usize)[k as usize].poly;
    let exact = to_f64(
        bell.eval(&Assignment::new().with_lambda(lambda.clone()).with_x(x_exact))
            .scalar()
            .expect("fully assigned"),
    );
    let scale = exact.abs().max(1.0);
    let max_rel_error =
        (matrix_value - exact).abs().max((series_value - exact).abs()) / scale;
    Ok(Expectation {
        matrix_value,
        series_value,
        exact,
        max_rel_error,
    })
}

/// `base (base - λ) ... (base - (k-1)λ)` in floating point.
pub fn degenerate_falling_f64(base: f64, k: u32, lambda: f64) -> f64 {
    (0..k).map(|i| base - i as f64 * lambda).product()
}

/// Rigorous bound on `Σ_{n ≥ from} |t_n|`, `t_n = e^{-x} x^n (n)_{k,λ} / n!`.
///
/// When `n > (k-1)|λ|` every factor `n - iλ` is positive and
/// `|t_{n+1} / t_n| ≤ ρ(n) = x/(n+1) · (1 + 1/(n - (k-1)|λ|))^k`, which
/// decreases in `n`. Once `ρ(from) ≤ 1/2` the tail is at most
/// `|t_from| / (1 - ρ(from))`. Returns `None` while that condition fails.
pub fn dobinski_tail_bound(k: u32, lambda: f64, x: f64, from: usize) -> Option<f64> {
    let n = from as f64;
    let margin = n - (k.saturating_sub(1)) as f64 * lambda.abs();
    if margin <= 0.0 {
        return None;
    }
    let rho = x / (n + 1.0) * (1.0 + 1.0 / margin).powi(k as i32);
    if rho > 0.5 {
        return None;
    }
    let term = poisson_weight(x, from) * degenerate_falling_f64(n, k, lambda).abs();
    Some(term / (1.0 - rho))
}

fn poisson_weight(x: f64, n: usize) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    // log-space keeps large n from overflowing x^n or n!
    let log_w = -x + n as f64 * x.ln() - ln_factorial(n);
    log_w.exp()
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// Compensated (Neumaier) summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.compensation += (self.sum - t) + v;
        } else {
            self.compensation += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Both series of the Dobinski-like formula, summed to the same depth.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DobinskiEval {
    /// `e^{-x} Σ_{n≥0} x^n (n)_{k,λ} / n!`
    pub unshifted: f64,
    /// `e^{-x} Σ_{n≥1} x^n (n-λ)_{k-1,λ} / (n-1)!`
    pub shifted: f64,
    pub terms: usize,
    pub tail_bound: f64,
}

/// Sums both Dobinski series until the rigorous tail bound drops below
/// `tol`, and checks that the two forms agree within `2·tol`.
pub fn dobinski_eval(k: u32, lambda: f64, x: f64, tol: f64) -> Result<DobinskiEval> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if tol <= 0.0 || !tol.is_finite() {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    if x < 0.0 || !x.is_finite() || !lambda.is_finite() {
        return Err(Error::InvalidArgument("x must be finite and ≥ 0, λ finite".into()));
    }
    let e = (-x).exp();
    let mut unshifted = NeumaierSum::default();
    let mut shifted = NeumaierSum::default();
    // x^n / n! and x^n / (n-1)!, without the e^{-x} factor
    let mut w_plain = 1.0f64;
    let mut w_shift = 0.0f64;
    for n in 0..MAX_DOBINSKI_TERMS {
        if n > 0 {
            w_plain *= x / n as f64;
            w_shift = if n == 1 { x } else { w_shift * x / (n - 1) as f64 };
        }
        unshifted.add(e * w_plain * degenerate_falling_f64(n as f64, k, lambda));
        if n >= 1 {
            shifted.add(e * w_shift * degenerate_falling_f64(n as f64 - lambda, k - 1, lambda));
        }
        let terms = n + 1;
        if let Some(bound) = dobinski_tail_bound(k, lambda, x, terms) {
            if bound < tol {
                let eval = DobinskiEval {
                    unshifted: unshifted.value(),
                    shifted: shifted.value(),
                    terms,
                    tail_bound: bound,
                };
                if (eval.unshifted - eval.shifted).abs() > 2.0 * tol {
                    return Err(Error::InvalidArgument(format!(
                        "Dobinski forms disagree: {} vs {}",
                        eval.unshifted, eval.shifted
                    )));
                }
                return Ok(eval);
            }
        }
    }
    Err(Error::NonConvergence {
        tol,
        steps: MAX_DOBINSKI_TERMS,
    })
}

/// Outcome of the exact generating-function identities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratingFunctionCheck {
    /// `Σ φ_k(x) t^k/k! = exp(x (e_λ(t) - 1))` to order `T`.
    pub closed_form: bool,
    /// `f'(t) = x e_λ^{1-λ}(t) f(t)` to order `T - 1`.
    pub ode: bool,
}

impl GeneratingFunctionCheck {
    pub fn pass(&self) -> bool {
        self.closed_form && self.ode
    }
}

/// Exact check in the series ring; `lambda = None` keeps `λ` symbolic, `x`
/// is always symbolic.
pub fn generating_function_check(
    lambda: Option<&Rational>,
    order: usize,
) -> Result<GeneratingFunctionCheck> {
    if order == 0 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    let assign = Assignment {
        lambda: lambda.cloned(),
        x: None,
    };
    let specialize = |s: Series| Series::from_fn(s.order(), |k| s.coeff(k).substitute(&assign));
    let x = MultiPoly::x();

    let f = specialize(Series::from_coeffs(
        bell_polys(order).into_iter().map(|b| b.poly).collect(),
    ));
    let exponent = (&degenerate_exp(&MultiPoly::one(), order) - &Series::one(order)).scale(&x);
    let closed = specialize(exponent).exp()?;

    let one_minus_lambda = MultiPoly::one() - MultiPoly::lambda();
    let rate = specialize(degenerate_exp(&one_minus_lambda, order - 1).scale(&x));
    let rhs = rate.mul(&f);
    let lhs = f.derivative()?;

    Ok(GeneratingFunctionCheck {
        closed_form: f == closed,
        ode: lhs == rhs,
    })
}
