pub mod error;
pub mod limit;
pub mod linalg;
pub mod rep;
pub mod rmatrix;
pub mod tensor;
pub mod scalar;
pub mod tables;
pub mod twist;

pub use error::{Error, EvalError, ParseError};
pub use scalar::{AffineExpr, Bracket, BracketProduct, HalfInt, ParamSymbol, Scalar};
