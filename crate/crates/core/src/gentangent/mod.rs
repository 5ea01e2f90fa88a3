//! The generalized tangent bundle TM ⊕ T*M.

pub mod endo;
pub mod metric;
pub mod section;

pub use endo::{
    b_transform, b_transform_closed_form, beta_transform, beta_transform_closed_form, exp_b, exp_beta, gen_endo_apply,
    GenEndo, GenOp,
};
pub use metric::{check_gen_metric, gen_metric_from_riemannian, GenMetric};
pub use section::{courant_bracket, frame, g0_pair, stacked_label, GenSection};
