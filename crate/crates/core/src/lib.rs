pub mod error;
pub mod frontend;
pub mod gentangent;
pub mod morphisms;
pub mod normality;
pub mod parastruct;
pub mod report;
pub mod symkernel;
pub mod tensorcalc;

pub use error::{Error, Result};
