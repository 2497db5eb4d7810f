//! Text syntax for single-mode boson expressions.
//!
//! ```text
//! expr     := [ "-" ] term { ("+" | "-") term } ;
//! term     := factor { "*" factor } ;
//! factor   := primary [ "^" nat | "_{" nat "," "lambda" "}" | "_" nat ] ;
//! primary  := "a" | "ad" | "N" | "lambda" | rational | "(" expr ")" ;
//! rational := int [ "/" nat ] ;
//! ```
//!
//! Whitespace is ignored between tokens. Multiplication is always explicit.
//! `N` is sugar for `ad*a`. `(·)_{k,lambda}` is the degenerate falling power
//! with step `λ`, `(·)_k` the ordinary one with step 1.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::boson::NormalForm;
use crate::poly::MultiPoly;
use crate::rational::Rational;

/// Largest accepted exponent or falling-power index.
pub const MAX_EXPONENT: u32 = 1 << 16;

/// Parenthesis nesting limit.
pub const MAX_DEPTH: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    A,
    Ad,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprAst {
    Generator(Generator),
    Scalar(Rational),
    Lambda,
    Add(Vec<ExprAst>),
    Mul(Vec<ExprAst>),
    Neg(Box<ExprAst>),
    Pow(Box<ExprAst>, u32),
    /// `(child)_{k,λ}`
    DegFallingPow(Box<ExprAst>, u32),
    /// `(child)_k`
    IntFallingPow(Box<ExprAst>, u32),
}

impl ExprAst {
    /// `ad*a`, the desugared `N`.
    pub fn number() -> ExprAst {
        ExprAst::Mul(vec![
            ExprAst::Generator(Generator::Ad),
            ExprAst::Generator(Generator::A),
        ])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected one of {expected:?}, found {found}")]
    Syntax {
        offset: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("exponent {value} at byte {offset} exceeds {MAX_EXPONENT}")]
    ExponentOverflow { offset: usize, value: String },
    #[error("zero denominator at byte {offset}")]
    ZeroDenominator { offset: usize },
    #[error("parentheses nested deeper than {MAX_DEPTH} at byte {offset}")]
    TooDeep { offset: usize },
}

/// Wire form `{"offset": int, "expected": [tokens], "found": token}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParseErrorJson {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::ExponentOverflow { offset, .. }
            | ParseError::ZeroDenominator { offset }
            | ParseError::TooDeep { offset } => *offset,
        }
    }

    pub fn to_json(&self) -> ParseErrorJson {
        let (expected, found) = match self {
            ParseError::Syntax {
                expected, found, ..
            } => (expected.clone(), found.clone()),
            ParseError::ExponentOverflow { value, .. } => {
                (vec![format!("nat <= {MAX_EXPONENT}")], value.clone())
            }
            ParseError::ZeroDenominator { .. } => (vec!["nonzero nat".into()], "0".into()),
            ParseError::TooDeep { .. } => (vec![format!("depth <= {MAX_DEPTH}")], "(".into()),
        };
        ParseErrorJson {
            offset: self.offset(),
            expected,
            found,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    A,
    Ad,
    N,
    Lambda,
    Int(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Underscore,
    LBrace,
    RBrace,
    Comma,
    LParen,
    RParen,
    Eof,
    Invalid(String),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::A => "a".into(),
            Tok::Ad => "ad".into(),
            Tok::N => "N".into(),
            Tok::Lambda => "lambda".into(),
            Tok::Int(s) => s.clone(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Slash => "/".into(),
            Tok::Caret => "^".into(),
            Tok::Underscore => "_".into(),
            Tok::LBrace => "{".into(),
            Tok::RBrace => "}".into(),
            Tok::Comma => ",".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Eof => "end of input".into(),
            Tok::Invalid(s) => s.clone(),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    tok: Tok,
    tok_start: usize,
    expected: Vec<&'static str>,
    depth: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        let mut p = Parser {
            src,
            pos: 0,
            tok: Tok::Eof,
            tok_start: 0,
            expected: Vec::new(),
            depth: 0,
        };
        p.advance();
        p
    }

    fn advance(&mut self) {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.tok_start = self.pos;
        self.expected.clear();
        let Some(c) = self.src[self.pos..].chars().next() else {
            self.tok = Tok::Eof;
            return;
        };
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '_' => Some(Tok::Underscore),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            self.tok = t;
            return;
        }
        let run = |pred: fn(&u8) -> bool| {
            bytes[self.pos..].iter().take_while(|b| pred(b)).count()
        };
        if c.is_ascii_digit() {
            let len = run(u8::is_ascii_digit);
            self.tok = Tok::Int(self.src[self.pos..self.pos + len].to_string());
            self.pos += len;
        } else if c.is_ascii_alphabetic() {
            let len = run(u8::is_ascii_alphabetic);
            let word = &self.src[self.pos..self.pos + len];
            self.tok = match word {
                "a" => Tok::A,
                "ad" => Tok::Ad,
                "N" => Tok::N,
                "lambda" => Tok::Lambda,
                other => Tok::Invalid(other.to_string()),
            };
            self.pos += len;
        } else {
            self.tok = Tok::Invalid(c.to_string());
            self.pos += c.len_utf8();
        }
    }

    /// True if the current token matches; records `name` as expected
    /// otherwise.
    fn at(&mut self, want: &Tok, name: &'static str) -> bool {
        let hit = std::mem::discriminant(&self.tok) == std::mem::discriminant(want);
        if !hit && !self.expected.contains(&name) {
            self.expected.push(name);
        }
        hit
    }

    fn eat(&mut self, want: &Tok, name: &'static str) -> bool {
        if self.at(want, name) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, want: &Tok, name: &'static str) -> PResult<()> {
        if self.eat(want, name) {
            Ok(())
        } else {
            Err(self.error())
        }
    }

    fn error(&self) -> ParseError {
        let mut expected: Vec<String> = self.expected.iter().map(|s| s.to_string()).collect();
        expected.sort();
        ParseError::Syntax {
            offset: self.tok_start,
            expected,
            found: self.tok.describe(),
        }
    }

    fn expr(&mut self) -> PResult<ExprAst> {
        let mut terms = Vec::new();
        let leading_minus = self.eat(&Tok::Minus, "-");
        let first = self.term()?;
        terms.push(if leading_minus {
            ExprAst::Neg(Box::new(first))
        } else {
            first
        });
        loop {
            if self.eat(&Tok::Plus, "+") {
                terms.push(self.term()?);
            } else if self.eat(&Tok::Minus, "-") {
                terms.push(ExprAst::Neg(Box::new(self.term()?)));
            } else {
                break;
            }
        }
        Ok(collapse(terms, ExprAst::Add))
    }

    fn term(&mut self) -> PResult<ExprAst> {
        let mut factors = vec![self.factor()?];
        while self.eat(&Tok::Star, "*") {
            factors.push(self.factor()?);
        }
        Ok(collapse(factors, ExprAst::Mul))
    }

    fn factor(&mut self) -> PResult<ExprAst> {
        let base = self.primary()?;
        if self.eat(&Tok::Caret, "^") {
            let n = self.nat()?;
            return Ok(ExprAst::Pow(Box::new(base), n));
        }
        if self.eat(&Tok::Underscore, "_") {
            if self.eat(&Tok::LBrace, "{") {
                let n = self.nat()?;
                self.expect(&Tok::Comma, ",")?;
                self.expect(&Tok::Lambda, "lambda")?;
                self.expect(&Tok::RBrace, "}")?;
                return Ok(ExprAst::DegFallingPow(Box::new(base), n));
            }
            let n = self.nat()?;
            return Ok(ExprAst::IntFallingPow(Box::new(base), n));
        }
        Ok(base)
    }

    fn primary(&mut self) -> PResult<ExprAst> {
        if self.eat(&Tok::A, "a") {
            return Ok(ExprAst::Generator(Generator::A));
        }
        if self.eat(&Tok::Ad, "ad") {
            return Ok(ExprAst::Generator(Generator::Ad));
        }
        if self.eat(&Tok::N, "N") {
            return Ok(ExprAst::number());
        }
        if self.eat(&Tok::Lambda, "lambda") {
            return Ok(ExprAst::Lambda);
        }
        if let Tok::Int(digits) = &self.tok {
            let num: BigInt = digits.parse().expect("digit run");
            self.advance();
            if self.eat(&Tok::Slash, "/") {
                let offset = self.tok_start;
                let den = self.big_nat()?;
                if den.is_zero() {
                    return Err(ParseError::ZeroDenominator { offset });
                }
                return Ok(ExprAst::Scalar(Rational::new(num, den)));
            }
            return Ok(ExprAst::Scalar(Rational::from_integer(num)));
        }
        self.at(&Tok::Int(String::new()), "int");
        if self.at(&Tok::LParen, "(") {
            if self.depth >= MAX_DEPTH {
                return Err(ParseError::TooDeep {
                    offset: self.tok_start,
                });
            }
            self.advance();
            self.depth += 1;
            let inner = self.expr()?;
            self.depth -= 1;
            self.expect(&Tok::RParen, ")")?;
            return Ok(inner);
        }
        Err(self.error())
    }

    fn big_nat(&mut self) -> PResult<BigInt> {
        if let Tok::Int(digits) = &self.tok {
            let v = digits.parse().expect("digit run");
            self.advance();
            Ok(v)
        } else {
            self.at(&Tok::Int(String::new()), "nat");
            Err(self.error())
        }
    }

    fn nat(&mut self) -> PResult<u32> {
        let offset = self.tok_start;
        let text = match &self.tok {
            Tok::Int(d) => d.clone(),
            _ => {
                self.at(&Tok::Int(String::new()), "nat");
                return Err(self.error());
            }
        };
        let v = self.big_nat()?;
        match u32::try_from(&v) {
            Ok(n) if n <= MAX_EXPONENT => Ok(n),
            _ => Err(ParseError::ExponentOverflow {
                offset,
                value: text,
            }),
        }
    }
}

fn collapse(mut items: Vec<ExprAst>, wrap: fn(Vec<ExprAst>) -> ExprAst) -> ExprAst {
    if items.len() == 1 {
        items.pop().unwrap()
    } else {
        wrap(items)
    }
}

pub fn parse(input: &str) -> Result<ExprAst, ParseError> {
    let mut p = Parser::new(input);
    let ast = p.expr()?;
    if !p.at(&Tok::Eof, "end of input") {
        return Err(p.error());
    }
    Ok(ast)
}

/// Maps an expression onto its canonical normal form.
pub fn eval_to_normal_form(ast: &ExprAst) -> NormalForm {
    match ast {
        ExprAst::Generator(Generator::A) => NormalForm::annihilator(),
        ExprAst::Generator(Generator::Ad) => NormalForm::creator(),
        ExprAst::Scalar(c) => NormalForm::scalar(MultiPoly::constant(c.clone())),
        ExprAst::Lambda => NormalForm::scalar(MultiPoly::lambda()),
        ExprAst::Add(items) => items
            .iter()
            .fold(NormalForm::zero(), |acc, e| &acc + &eval_to_normal_form(e)),
        ExprAst::Mul(items) => items
            .iter()
            .fold(NormalForm::identity(), |acc, e| acc.mul(&eval_to_normal_form(e))),
        ExprAst::Neg(e) => -&eval_to_normal_form(e),
        ExprAst::Pow(e, n) => eval_to_normal_form(e).pow(*n),
        ExprAst::DegFallingPow(e, k) => {
            eval_to_normal_form(e).degenerate_power(*k, &MultiPoly::lambda())
        }
        ExprAst::IntFallingPow(e, k) => {
            eval_to_normal_form(e).degenerate_power(*k, &MultiPoly::one())
        }
    }
}

/// Renders in the input grammar. Every AST produced by [`parse`] renders to
/// a string that parses back to the same AST.
impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_expr(self))
    }
}

fn render_expr(e: &ExprAst) -> String {
    match e {
        ExprAst::Add(items) => {
            let mut out = String::new();
            for (idx, item) in items.iter().enumerate() {
                match (idx, item) {
                    (0, ExprAst::Neg(inner)) => {
                        out.push('-');
                        out.push_str(&render_term(inner));
                    }
                    (0, _) => out.push_str(&render_term(item)),
                    (_, ExprAst::Neg(inner)) => {
                        out.push_str(" - ");
                        out.push_str(&render_term(inner));
                    }
                    (_, _) => {
                        out.push_str(" + ");
                        out.push_str(&render_term(item));
                    }
                }
            }
            out
        }
        ExprAst::Neg(inner) => format!("-{}", render_term(inner)),
        _ => render_term(e),
    }
}

fn render_term(e: &ExprAst) -> String {
    match e {
        ExprAst::Mul(items) => items
            .iter()
            .map(render_factor)
            .collect::<Vec<_>>()
            .join("*"),
        _ => render_factor(e),
    }
}

fn render_factor(e: &ExprAst) -> String {
    match e {
        ExprAst::Pow(b, n) => format!("{}^{n}", render_primary(b)),
        ExprAst::DegFallingPow(b, n) => format!("{}_{{{n},lambda}}", render_primary(b)),
        ExprAst::IntFallingPow(b, n) => format!("{}_{n}", render_primary(b)),
        _ => render_primary(e),
    }
}

fn render_primary(e: &ExprAst) -> String {
    match e {
        ExprAst::Generator(Generator::A) => "a".into(),
        ExprAst::Generator(Generator::Ad) => "ad".into(),
        ExprAst::Lambda => "lambda".into(),
        ExprAst::Scalar(c) if !c.is_negative() => c.to_string(),
        ExprAst::Scalar(c) => format!("(-{})", -c),
        _ => format!("({})", render_expr(e)),
    }
}
