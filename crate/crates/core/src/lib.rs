//! Homological growth invariants of chain complexes over ℤ[ℤ^m] along towers
//! of finite quotients.

pub mod chain;
pub mod corpus;
pub mod error;
pub mod finite_group_homology;
pub mod group_ring;
pub mod growth;
pub mod linalg;

pub use error::{Error, Result};
pub use chain::IntChainComplex;
pub use linalg::IntMatrix;
