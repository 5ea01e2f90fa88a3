//! Coordinate charts, tensor fields and their calculus.

pub mod calculus;
pub mod chart;
pub mod fields;
pub mod matrix;

pub use calculus::*;
pub use chart::{Chart, ChartRef};
pub use fields::{Bivector, Components, Endo, Metric, OneForm, Signature, TwoForm, VectorField};
pub use matrix::SMatrix;
