//! Normality of almost paracontact structures, classically and through the
//! Courant–Nijenhuis tensor of the adapted product structure on M×ℝ.

pub mod classical;
pub mod generalized;

pub use classical::{classical_normality, product_structures, product_structures_report};
pub use generalized::{
    adapted_product, courant_nijenhuis, generalized_normality, normality_equivalence, product_block_conditions,
    AdaptedProduct,
};
