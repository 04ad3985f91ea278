//! Chain complexes over ℤ[ℤ^m] and their finite quotients.

mod complex;
pub mod examples;
pub mod fourier;
mod module;
mod poly;

pub use complex::{
    base_change, homology_with_action, operator_norm_bound, regular_representation, LaurentChainComplex, Permutation, QuotientComplex,
    QuotientSpec,
};
pub use examples::{
    circle_complex, mapping_torus_complex, product_with_circle, s1_cross, simply_connected_piece, torus_complex,
};
pub use module::ModuleWithAction;
pub use poly::{LaurentPoly, PolyMatrix};
