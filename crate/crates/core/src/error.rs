use thiserror::Error;

use crate::exactfield::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero in ℚ(t)")]
    DivisionByZero,

    #[error("gcd of two zero polynomials is undefined")]
    ZeroGcd,

    #[error("evaluation failed at x = {point}: {reason}")]
    Evaluation {
        point: Box<Rational>,
        reason: String,
    },

    #[error(
        "input is not a polynomial function of degree ≤ {degree}: residual {residual} at x = {witness}"
    )]
    NotPolynomial {
        degree: usize,
        witness: Box<Rational>,
        residual: Box<Rational>,
    },

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Elaboration(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
