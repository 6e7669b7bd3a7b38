//! Exact scalars: half-integers, affine bracket arguments, Laurent
//! polynomials, the rational function field and the bracket map.

pub mod affine;
pub mod bracket;
pub mod eval;
pub mod field;
pub mod halfint;
pub mod parse;
pub mod poly;

pub use affine::{AffineExpr, ParamSymbol};
pub use bracket::{bracket, q_factorial, qgamma_ratio, Bracket, BracketProduct};
pub use eval::{ClassicalPoint, Evaluator, FloatPoint, GeneratorPoint, QPoint};
pub use field::Scalar;
pub use halfint::HalfInt;
pub use parse::{parse_bracket_product, parse_scalar, parse_scalar_with};
pub use poly::{Mono, Poly};
