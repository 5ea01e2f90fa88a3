//! Almost paracontact structures, their generalized counterparts and the
//! checks relating them.

pub mod catalog;
pub mod compat;
pub mod family;
pub mod structures;
pub mod transforms;

pub use compat::compatibility_check;
pub use family::{family_at, family_structure, one_param_family};
pub use structures::{
    check_apc, check_apc_metric, check_gapc, check_induced_square, gapc_block_conditions, induce_gapc, Apc, Gapc,
};
pub use transforms::{b_invariance, b_sufficiency, beta_invariance, beta_sufficiency, fundamental_form};
