use std::process::ExitCode;

use bosonorder::combinatorics::{bell_polys, StirlingTable};
use bosonorder::fock::dobinski_eval;
use bosonorder::poly::{Assignment, MultiPoly};
use bosonorder::rational::{fraction_string, from_f64, parse_rational, to_f64, Rational};
use bosonorder::verify::{run_suite, Suite, SuiteParams};
use bosonorder::{eval_to_normal_form, parse, Error};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

/// Largest table size the stirling and bell commands will build.
const MAX_TABLE: usize = 200;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "bosonorder", version, about = "Degenerate Stirling numbers, Bell polynomials and boson normal ordering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    #[default]
    Plain,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Triangle of degenerate Stirling numbers of the second kind
    Stirling {
        #[arg(long)]
        max_n: usize,
        /// Exact rational value for λ, e.g. 1/2; symbolic when omitted
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        lambda: Option<Rational>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Degenerate Bell polynomials φ_0 .. φ_max_n
    Bell {
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        lambda: Option<Rational>,
        /// Exact rational value for x; symbolic when omitted
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        x: Option<Rational>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Normal-order an expression in a, ad, N and lambda
    NormalOrder {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true)]
        lambda: Option<Rational>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Evaluate both Dobinski series for φ_k(x) and compare with the exact value
    Dobinski {
        #[arg(long)]
        k: u32,
        #[arg(long, value_parser = rational_arg, allow_hyphen_values = true, default_value = "0")]
        lambda: Rational,
        /// Rational (e.g. 1/2) or decimal
        #[arg(long, value_parser = real_arg)]
        x: Rational,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run a verification suite and print one JSON line per check
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long)]
        max_k: Option<usize>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        words: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cutoff: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("'{s}' is not an exact rational (expected e.g. 3, -1/2)"))
}

fn real_arg(s: &str) -> Result<Rational, String> {
    if let Some(r) = parse_rational(s) {
        return Ok(r);
    }
    s.parse::<f64>()
        .ok()
        .and_then(from_f64)
        .ok_or_else(|| format!("'{s}' is not a number"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Stirling { max_n, lambda, format } => stirling(max_n, lambda, format),
        Command::Bell { max_n, lambda, x, format } => bell(max_n, lambda, x, format),
        Command::NormalOrder { expr, lambda, format } => normal_order(&expr, lambda, format),
        Command::Dobinski { k, lambda, x, tol, format } => dobinski(k, &lambda, &x, tol, format),
        Command::Verify {
            suite,
            max_n,
            max_k,
            order,
            words,
            seed,
            cutoff,
            tol,
        } => verify(
            &suite,
            SuiteParams {
                max_n,
                max_k,
                order,
                words,
                seed,
                cutoff,
                tol,
            },
        ),
    }
}

fn lambda_assignment(lambda: Option<Rational>) -> Assignment {
    Assignment {
        lambda,
        x: None,
    }
}

fn check_cap(max_n: usize) -> Option<ExitCode> {
    (max_n > MAX_TABLE).then(|| {
        eprintln!("error: max-n {max_n} exceeds the cap of {MAX_TABLE}");
        ExitCode::from(EXIT_RESOURCE)
    })
}

fn to_json_string<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("output serializes")
}

fn stirling(max_n: usize, lambda: Option<Rational>, format: Format) -> ExitCode {
    if let Some(code) = check_cap(max_n) {
        return code;
    }
    let table = StirlingTable::new(max_n).substitute(&lambda_assignment(lambda));
    match format {
        Format::Plain => {
            for n in 0..=max_n {
                // S(n, 0) vanishes for n ≥ 1
                let first = if n == 0 { 0 } else { 1 };
                let cells: Vec<String> = table.row(n)[first..].iter().map(|p| p.to_string()).collect();
                println!("{}", cells.join(", "));
            }
        }
        Format::Json => println!("{}", to_json_string(&table.to_json())),
        Format::Csv => print!("{}", table.to_csv()),
    }
    ExitCode::SUCCESS
}

fn bell(max_n: usize, lambda: Option<Rational>, x: Option<Rational>, format: Format) -> ExitCode {
    if let Some(code) = check_cap(max_n) {
        return code;
    }
    let assign = Assignment { lambda, x };
    let polys: Vec<MultiPoly> = bell_polys(max_n)
        .into_iter()
        .map(|b| b.poly.substitute(&assign))
        .collect();
    match format {
        Format::Plain => {
            for (n, p) in polys.iter().enumerate() {
                println!("{n}: {p}");
            }
        }
        Format::Json => {
            let rows: Vec<_> = polys
                .iter()
                .enumerate()
                .map(|(n, p)| json!({ "n": n, "poly": p.to_json(), "text": p.to_string() }))
                .collect();
            println!("{}", to_json_string(&rows));
        }
        Format::Csv => {
            println!("n,poly");
            for (n, p) in polys.iter().enumerate() {
                println!("{n},{p}");
            }
        }
    }
    ExitCode::SUCCESS
}

fn normal_order(expr: &str, lambda: Option<Rational>, format: Format) -> ExitCode {
    let ast = match parse(expr) {
        Ok(ast) => ast,
        Err(e) => {
            eprintln!("{}", to_json_string(&e.to_json()));
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let nf = eval_to_normal_form(&ast).substitute(&lambda_assignment(lambda));
    match format {
        Format::Plain => println!("{nf}"),
        Format::Json => println!("{}", to_json_string(&nf.to_json())),
        Format::Csv => {
            println!("i,j,coeff");
            for ((i, j), c) in nf.terms().rev() {
                println!("{i},{j},{c}");
            }
        }
    }
    ExitCode::SUCCESS
}

fn dobinski(k: u32, lambda: &Rational, x: &Rational, tol: f64, format: Format) -> ExitCode {
    let eval = match dobinski_eval(k, to_f64(lambda), to_f64(x), tol) {
        Ok(eval) => eval,
        Err(e @ Error::NonConvergence { .. }) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_RESOURCE);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let exact = bell_polys(k as usize)[k as usize]
        .poly
        .eval(&Assignment::new().with_lambda(lambda.clone()).with_x(x.clone()))
        .scalar()
        .map(to_f64)
        .expect("λ and x assigned");
    let err_unshifted = (eval.unshifted - exact).abs();
    let err_shifted = (eval.shifted - exact).abs();
    let pass = err_unshifted < 5.0 * tol && err_shifted < 5.0 * tol;
    match format {
        Format::Plain => {
            println!("unshifted: {}", eval.unshifted);
            println!("shifted: {}", eval.shifted);
            println!("exact: {exact}");
            println!("error_unshifted: {err_unshifted:e}");
            println!("error_shifted: {err_shifted:e}");
            println!("terms: {}", eval.terms);
        }
        Format::Json => println!(
            "{}",
            json!({
                "k": k,
                "lambda": fraction_string(lambda),
                "x": to_f64(x),
                "unshifted": eval.unshifted,
                "shifted": eval.shifted,
                "exact": exact,
                "error_unshifted": err_unshifted,
                "error_shifted": err_shifted,
                "terms": eval.terms,
                "pass": pass,
            })
        ),
        Format::Csv => {
            println!("unshifted,shifted,exact,error_unshifted,error_shifted,terms");
            println!(
                "{},{},{exact},{err_unshifted:e},{err_shifted:e},{}",
                eval.unshifted, eval.shifted, eval.terms
            );
        }
    }
    if pass {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: deviation exceeds {}", 5.0 * tol);
        ExitCode::from(EXIT_FAIL)
    }
}

fn verify(suite: &str, params: SuiteParams) -> ExitCode {
    let suite: Suite = match suite.parse() {
        Ok(s) => s,
        Err(e) => {
            let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
            eprintln!("error: {e}; known suites: {}", names.join(", "));
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let lines = match run_suite(suite, &params) {
        Ok(lines) => lines,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let mut failed = 0;
    for line in &lines {
        println!("{}", line.to_json_line());
        failed += usize::from(!line.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        eprintln!("{failed} of {} checks failed", lines.len());
        ExitCode::from(EXIT_FAIL)
    }
}
