//! Coordinate diffeomorphisms and the maps they induce on structures.

pub mod checks;
pub mod diffeo;

pub use checks::{check_gen_commutation, check_paracontactomorphism};
pub use diffeo::{induced_gen_map, maps, pullback_form, pushforward_vf, Diffeo};
