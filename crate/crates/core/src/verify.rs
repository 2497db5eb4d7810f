//! Named verification suites. Each suite runs a family of identity checks
//! and yields one [`ReportLine`] per check, in a deterministic order.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::boson::{verify_normal_ordering_theorem, NormalForm};
use crate::combinatorics::{
    bell_polys, bell_recurrence_step, euler_operator_degenerate, falling_factorial,
    integer_point_expansion, stirling_column_series, verify_defining_identity, StirlingTable,
};
use crate::error::Result;
use crate::fock::{
    coherent_cutoff, coherent_overlap, coherent_state, degenerate_falling_f64, dobinski_eval,
    generating_function_check, matrix_of_normal_form, norm_deficit, oracle_check, Letter,
    NORM_DEFICIT_TOL,
};
use crate::poly::{Assignment, Monomial, MultiPoly};
use crate::rational::{fraction_string, int, rat, to_f64, Rational};

/// One JSON line of a verification report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportLine {
    pub check: String,
    pub params: Map<String, Value>,
    pub pass: bool,
    pub max_error: Option<f64>,
}

impl ReportLine {
    fn new(check: &str, params: Value, pass: bool, max_error: Option<f64>) -> Self {
        let params = match params {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        ReportLine {
            check: check.to_string(),
            params,
            pass,
            max_error,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report lines serialize")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    DefiningIdentity,
    ColumnSeries,
    NormalOrdering,
    FockOracle,
    GeneratingFunction,
    BellRecurrence,
    DobinskiGrid,
    EulerOperator,
    Eigenvalue,
    CoherentState,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::DefiningIdentity,
        Suite::ColumnSeries,
        Suite::NormalOrdering,
        Suite::FockOracle,
        Suite::GeneratingFunction,
        Suite::BellRecurrence,
        Suite::DobinskiGrid,
        Suite::EulerOperator,
        Suite::Eigenvalue,
        Suite::CoherentState,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::DefiningIdentity => "defining-identity",
            Suite::ColumnSeries => "column-series",
            Suite::NormalOrdering => "normal-ordering",
            Suite::FockOracle => "fock-oracle",
            Suite::GeneratingFunction => "generating-function",
            Suite::BellRecurrence => "bell-recurrence",
            Suite::DobinskiGrid => "dobinski-grid",
            Suite::EulerOperator => "euler-operator",
            Suite::Eigenvalue => "eigenvalue",
            Suite::CoherentState => "coherent-state",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

/// Size parameters; `None` picks the suite's default.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SuiteParams {
    pub max_n: Option<usize>,
    pub max_k: Option<usize>,
    pub order: Option<usize>,
    pub words: Option<usize>,
    pub seed: Option<u64>,
    pub cutoff: Option<usize>,
    pub tol: Option<f64>,
}

pub const DEFAULT_SEED: u64 = 7;

/// λ values of the Dobinski grid.
pub fn dobinski_lambdas() -> [Rational; 5] {
    [int(0), rat(1, 4), rat(1, 2), int(1), rat(-1, 2)]
}

/// x values of the Dobinski grid.
pub fn dobinski_xs() -> [Rational; 3] {
    [rat(1, 2), int(1), int(2)]
}

pub fn run_suite(suite: Suite, params: &SuiteParams) -> Result<Vec<ReportLine>> {
    let seed = params.seed.unwrap_or(DEFAULT_SEED);
    match suite {
        Suite::DefiningIdentity => Ok(defining_identity(params.max_n.unwrap_or(12))),
        Suite::ColumnSeries => Ok(column_series(
            params.max_k.unwrap_or(8),
            params.order.unwrap_or(15),
        )),
        Suite::NormalOrdering => Ok(normal_ordering(params.max_k.unwrap_or(12))),
        Suite::FockOracle => fock_oracle(
            params.words.unwrap_or(200),
            seed,
            params.cutoff.unwrap_or(40),
        ),
        Suite::GeneratingFunction => generating_function(params.order.unwrap_or(8)),
        Suite::BellRecurrence => bell_recurrence(params.max_k.unwrap_or(10)),
        Suite::DobinskiGrid => Ok(dobinski_grid(
            params.max_k.unwrap_or(8),
            params.tol.unwrap_or(1e-10),
        )),
        Suite::EulerOperator => euler_operator(
            params.max_n.unwrap_or(8),
            params.words.unwrap_or(5),
            seed,
        ),
        Suite::Eigenvalue => eigenvalue(params.max_n.unwrap_or(10), params.max_k.unwrap_or(10)),
        Suite::CoherentState => coherent(params.words.unwrap_or(20), seed),
    }
}

pub fn defining_identity(max_n: usize) -> Vec<ReportLine> {
    let table = StirlingTable::new(max_n);
    (0..=max_n)
        .into_par_iter()
        .map(|n| {
            ReportLine::new(
                "defining-identity",
                json!({ "n": n }),
                verify_defining_identity(&table, n),
                None,
            )
        })
        .collect()
}

/// Column `k` of the generating-function side against the recurrence table,
/// coefficient by coefficient up to `order`.
pub fn column_series_matches(table: &StirlingTable, k: usize, order: usize) -> bool {
    let series = stirling_column_series(k as u32, order);
    (0..=order).all(|n| *series.coeff(n) == table.get(n, k))
}

pub fn column_series(max_k: usize, order: usize) -> Vec<ReportLine> {
    let table = StirlingTable::new(order);
    (0..=max_k)
        .into_par_iter()
        .map(|k| {
            ReportLine::new(
                "column-series",
                json!({ "k": k, "order": order }),
                column_series_matches(&table, k, order),
                None,
            )
        })
        .collect()
}

/// Degenerate normal ordering against the table, plus the `λ := 0`
/// specialization against the classical triangle.
pub fn normal_ordering_holds(table: &StirlingTable, k: usize) -> bool {
    let classical = Assignment::new().with_lambda(int(0));
    let degenerate = verify_normal_ordering_theorem(k, table);
    let power = NormalForm::number().pow(k as u32);
    let classical_table = table.substitute(&classical);
    let expected = NormalForm::from_terms(
        (0..=k).map(|l| ((l as u32, l as u32), classical_table.get(k, l))),
    );
    let specialized = NormalForm::number()
        .degenerate_power(k as u32, &MultiPoly::lambda())
        .substitute(&classical);
    degenerate && power == expected && specialized == power
}

pub fn normal_ordering(max_k: usize) -> Vec<ReportLine> {
    let table = StirlingTable::new(max_k);
    (0..=max_k)
        .into_par_iter()
        .map(|k| {
            ReportLine::new(
                "normal-ordering",
                json!({ "k": k }),
                normal_ordering_holds(&table, k),
                None,
            )
        })
        .collect()
}

/// Seeded random words of total generator length `1..=max_len`.
pub fn random_words(count: usize, max_len: usize, seed: u64) -> Vec<Vec<Letter>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let target = rng.gen_range(1..=max_len);
            let mut word = Vec::new();
            let mut used = 0;
            while used < target {
                let letter = match rng.gen_range(0..3) {
                    0 => Letter::A,
                    1 => Letter::Ad,
                    _ if target - used >= 2 => Letter::ShiftedNumber,
                    _ => Letter::A,
                };
                used += letter.generators();
                word.push(letter);
            }
            word
        })
        .collect()
}

pub fn word_string(word: &[Letter]) -> String {
    word.iter().map(|l| l.symbol()).collect::<Vec<_>>().join("*")
}

pub fn fock_oracle(words: usize, seed: u64, cutoff: usize) -> Result<Vec<ReportLine>> {
    let words = random_words(words, 6, seed);
    let lambdas = [int(0), rat(1, 2)];
    let jobs: Vec<(usize, &Vec<Letter>, &Rational)> = words
        .iter()
        .enumerate()
        .flat_map(|(idx, w)| lambdas.iter().map(move |l| (idx, w, l)))
        .collect();
    jobs.into_par_iter()
        .map(|(idx, word, lambda)| {
            let report = oracle_check(word, lambda, cutoff)?;
            Ok(ReportLine::new(
                "fock-oracle",
                json!({
                    "index": idx,
                    "word": word_string(word),
                    "lambda": fraction_string(lambda),
                    "cutoff": cutoff,
                    "block": report.block,
                }),
                report.pass,
                Some(report.max_error),
            ))
        })
        .collect()
}

pub fn generating_function(order: usize) -> Result<Vec<ReportLine>> {
    let modes: [(String, Option<Rational>); 3] = [
        ("symbolic".into(), None),
        ("0/1".into(), Some(int(0))),
        ("1/2".into(), Some(rat(1, 2))),
    ];
    let mut lines = Vec::new();
    for (label, lambda) in &modes {
        let check = generating_function_check(lambda.as_ref(), order)?;
        for (part, ok) in [("closed-form", check.closed_form), ("ode", check.ode)] {
            lines.push(ReportLine::new(
                "generating-function",
                json!({ "lambda": label, "order": order, "part": part }),
                ok,
                None,
            ));
        }
    }
    Ok(lines)
}

pub fn bell_recurrence(max_k: usize) -> Result<Vec<ReportLine>> {
    let bells: Vec<MultiPoly> = bell_polys(max_k + 1).into_iter().map(|b| b.poly).collect();
    (0..=max_k)
        .map(|k| {
            let step = bell_recurrence_step(&bells[..=k])?;
            Ok(ReportLine::new(
                "bell-recurrence",
                json!({ "k": k }),
                step == bells[k + 1],
                None,
            ))
        })
        .collect()
}

/// Dobinski evaluation against the exact Bell polynomial; the error is the
/// larger of the two series forms' absolute deviations.
pub fn dobinski_against_exact(
    k: u32,
    lambda: &Rational,
    x: &Rational,
    tol: f64,
) -> Result<(f64, f64, crate::fock::DobinskiEval)> {
    let bell = &bell_polys(k as usize)[k as usize].poly;
    let exact = bell
        .eval(&Assignment::new().with_lambda(lambda.clone()).with_x(x.clone()))
        .scalar()
        .map(to_f64)
        .expect("fully assigned");
    let eval = dobinski_eval(k, to_f64(lambda), to_f64(x), tol)?;
    let err = (eval.unshifted - exact)
        .abs()
        .max((eval.shifted - exact).abs());
    Ok((exact, err, eval))
}

pub fn dobinski_grid(max_k: usize, tol: f64) -> Vec<ReportLine> {
    let mut jobs = Vec::new();
    for k in 1..=max_k as u32 {
        for lambda in dobinski_lambdas() {
            for x in dobinski_xs() {
                jobs.push((k, lambda.clone(), x));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(k, lambda, x)| {
            let params = json!({
                "k": k,
                "lambda": fraction_string(&lambda),
                "x": fraction_string(&x),
                "tol": tol,
            });
            match dobinski_against_exact(k, &lambda, &x, tol) {
                Ok((_, err, eval)) => {
                    let mut line = ReportLine::new("dobinski-grid", params, err < 5.0 * tol, Some(err));
                    line.params.insert("terms".into(), json!(eval.terms));
                    line
                }
                Err(e) => {
                    let mut line = ReportLine::new("dobinski-grid", params, false, None);
                    line.params.insert("error".into(), json!(e.to_string()));
                    line
                }
            }
        })
        .collect()
}

/// Seeded random polynomial in `x` of degree at most `max_degree` with small
/// rational coefficients.
pub fn random_x_poly(rng: &mut impl Rng, max_degree: u32) -> MultiPoly {
    MultiPoly::from_terms((0..=max_degree).map(|e| {
        let num = rng.gen_range(-5i64..=5);
        let den = rng.gen_range(1i64..=3);
        (Monomial::new(0, e), rat(num, den))
    }))
}

pub fn euler_operator(max_n: usize, samples: usize, seed: u64) -> Result<Vec<ReportLine>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let polys: Vec<MultiPoly> = (0..samples).map(|_| random_x_poly(&mut rng, 6)).collect();
    let mut lines = Vec::new();
    for n in 0..=max_n {
        for (idx, p) in polys.iter().enumerate() {
            let eval = euler_operator_degenerate(p, n as u32)?;
            lines.push(ReportLine::new(
                "euler-operator",
                json!({ "n": n, "sample": idx, "poly": p.to_string() }),
                eval.agree(),
                None,
            ));
        }
    }
    Ok(lines)
}

/// Relative tolerance of the numeric eigenvalue check, measured against
/// `max(1, |(m)_{k,λ}|)`.
pub const EIGENVALUE_REL_TOL: f64 = 1e-10;

/// For one `k`: the symbolic eigenvalue of `(a†a)_{k,λ}` on every `|m⟩`,
/// `m ≤ max_m`, from the normal form and from the Stirling expansion, both
/// equal to `(m)_{k,λ}`; plus the numeric diagonal at `λ ∈ {0, 1/2, -1/2}`.
/// Returns `(symbolic_ok, max relative numeric error)`.
pub fn eigenvalue_check(table: &StirlingTable, k: usize, max_m: usize) -> Result<(bool, f64)> {
    let lambda = MultiPoly::lambda();
    let nf = NormalForm::number().degenerate_power(k as u32, &lambda);
    let mut symbolic_ok = true;
    for m in 0..=max_m {
        let target = falling_factorial(k as u32, &MultiPoly::from_int(m as i64), &lambda);
        symbolic_ok &= nf.apply_number_state(m as u64)? == target;
        symbolic_ok &= integer_point_expansion(table, k, m as u64) == target;
    }
    let mut max_err = 0.0f64;
    for lambda_value in [int(0), rat(1, 2), rat(-1, 2)] {
        let lf = to_f64(&lambda_value);
        let specialized = nf.substitute(&Assignment::new().with_lambda(lambda_value.clone()));
        let matrix = matrix_of_normal_form(&specialized, lf, max_m + 1)?;
        for m in 0..=max_m {
            let exact = falling_factorial(k as u32, &MultiPoly::from_int(m as i64), &lambda)
                .eval_f64(lf, 0.0);
            let want = degenerate_falling_f64(m as f64, k as u32, lf);
            debug_assert!((exact - want).abs() <= 1e-6 * want.abs().max(1.0));
            let scale = exact.abs().max(1.0);
            for col in 0..=max_m {
                let entry = matrix.get(m, col);
                let target = if col == m { exact } else { 0.0 };
                max_err = max_err.max((entry.re - target).abs().max(entry.im.abs()) / scale);
            }
        }
    }
    Ok((symbolic_ok, max_err))
}

pub fn eigenvalue(max_m: usize, max_k: usize) -> Result<Vec<ReportLine>> {
    let table = StirlingTable::new(max_k);
    (0..=max_k)
        .into_par_iter()
        .map(|k| {
            let (symbolic, err) = eigenvalue_check(&table, k, max_m)?;
            Ok(ReportLine::new(
                "eigenvalue",
                json!({ "k": k, "max_m": max_m }),
                symbolic && err < EIGENVALUE_REL_TOL,
                Some(err),
            ))
        })
        .collect()
}

/// Seeded complex points with `|z| ≤ radius`.
pub fn random_points(count: usize, radius: f64, rng: &mut impl Rng) -> Vec<Complex64> {
    (0..count)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            Complex64::from_polar(r, theta)
        })
        .collect()
}

/// Tolerance of the truncated overlap against its closed form.
pub const OVERLAP_TOL: f64 = 1e-10;

pub fn coherent(pairs: usize, seed: u64) -> Result<Vec<ReportLine>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::new();
    let mut norm_points = vec![Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)];
    norm_points.extend(random_points(pairs, 2.0, &mut rng));
    for z in norm_points {
        let dim = coherent_cutoff(z);
        let state = coherent_state(z, dim)?;
        let err = (state.norm_sqr() - 1.0).abs();
        lines.push(ReportLine::new(
            "coherent-norm",
            json!({ "re": z.re, "im": z.im, "cutoff": dim, "deficit": norm_deficit(z, dim) }),
            err < NORM_DEFICIT_TOL,
            Some(err),
        ));
    }
    let xs = random_points(pairs, 2.0, &mut rng);
    let ys = random_points(pairs, 2.0, &mut rng);
    for (x, y) in xs.into_iter().zip(ys) {
        let dim = coherent_cutoff(x).max(coherent_cutoff(y));
        let truncated = coherent_state(x, dim)?.inner(&coherent_state(y, dim)?);
        let err = (truncated - coherent_overlap(x, y)).norm();
        lines.push(ReportLine::new(
            "coherent-overlap",
            json!({ "x": [x.re, x.im], "y": [y.re, y.im], "cutoff": dim }),
            err < OVERLAP_TOL,
            Some(err),
        ));
    }
    Ok(lines)
}
