//! Symbolic scalar kernel: parsing, canonical forms, differentiation and the
//! zero test every tensor check is built on.

pub mod expr;
pub mod lexer;
pub mod parser;
pub mod random;
pub mod scalar;
pub mod zero;

pub use expr::{Expr, Point};
pub use parser::{expr_parse, parse_in, Scope};
pub use scalar::{expr_simplify, Scalar};
pub use zero::{expr_is_zero, Sampler, SamplerConfig, Tier, ZeroVerdict};

/// Partial derivative of a raw expression tree.
pub fn expr_diff(e: &Expr, v: &str) -> Expr {
    e.diff(v)
}
