//! Degenerate Stirling numbers, degenerate Bell polynomials and the normal
//! ordering of degenerate powers of the boson number operator.
//!
//! Symbolic work is exact: coefficients are [`MultiPoly`] values in `λ` and
//! `x` over arbitrary-precision rationals. The [`fock`] module is a separate
//! double-precision oracle on truncated Fock space.

pub mod boson;
pub mod combinatorics;
pub mod error;
pub mod fock;
pub mod parser;
pub mod poly;
pub mod rational;
pub mod series;
pub mod verify;

pub use boson::NormalForm;
pub use combinatorics::{bell_poly, bell_polys, BellPoly, StirlingTable};
pub use error::{Error, Result};
pub use parser::{eval_to_normal_form, parse, ExprAst, ParseError};
pub use poly::{Assignment, Monomial, MultiPoly};
pub use rational::{parse_rational, Rational};
pub use series::Series;
