use thiserror::Error;

use crate::scalar::AffineExpr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("not a half-integer: {0:?}")]
    HalfInt(String),
    #[error("scalar syntax error at byte {pos}: {msg}")]
    Scalar { pos: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("pole: [{0}] vanishes at the evaluation point")]
    BracketPole(AffineExpr),
    #[error("pole: denominator vanishes at the evaluation point")]
    Pole,
    #[error("value is not rational at this point ({0})")]
    Irrational(String),
    #[error("no value assigned to {0}")]
    Missing(String),
    #[error("q = 1 is not a valid deformation point")]
    Undeformed,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("no twist exists here: existence condition fails for j = {j}")]
    Existence { j: i64 },
    #[error("Γ-ratio arguments {top} and {bottom} do not differ by an integer")]
    NonIntegerShift { top: AffineExpr, bottom: AffineExpr },
    #[error("invalid representation: {0}")]
    Rep(String),
    #[error("matrix is singular")]
    Singular,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
