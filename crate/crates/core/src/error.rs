use thiserror::Error;

/// Errors raised by the symbolic kernel, the tensor layer and the front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("unknown identifier `{name}` at {line}:{col}")]
    UnknownIdentifier { name: String, line: usize, col: usize },

    #[error("division by an expression whose canonical form is zero")]
    DivisionByZero,

    #[error("unbound variable `{0}` during evaluation")]
    Unbound(String),

    #[error("evaluation hit a pole at every candidate point after {0} retries")]
    Pole(usize),

    #[error("chart mismatch: `{left}` vs `{right}`")]
    ChartMismatch { left: String, right: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid chart: {0}")]
    InvalidChart(String),

    #[error("components are not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),

    #[error("components are not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),

    #[error("degenerate metric: determinant has zero canonical form")]
    DegenerateMetric,

    #[error("lower-right block is not -(upper-left)^*: {0}")]
    SkewnessViolation(String),

    #[error("exterior derivative of a form of degree {0} is not supported")]
    UnsupportedDegree(usize),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("session error at line {line}: {msg}")]
    Session { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
