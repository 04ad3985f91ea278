//! Exact integer linear algebra.

pub mod det;
pub mod fk;
pub mod lattice;
pub mod matrix;
pub mod numeric;
pub mod smith;
pub(crate) mod sparse;

pub use det::{bareiss_determinant, gram_determinant, gram_of_columns, solve_rational};
pub use fk::{fk_determinant, fk_factorization_check, FKDet, FactorizationReport};
pub use lattice::{hnf_basis, kernel_basis, kernel_lattice, saturation, subquotient, Lattice};
pub use matrix::IntMatrix;
pub use smith::{cokernel_structure, rank, smith_normal_form, smith_with_transforms, CokernelStructure, SmithForm};
