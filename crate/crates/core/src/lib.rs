//! Rank invariants, signed cube decompositions and polynomial invariants of
//! finite multiparameter persistence modules.

pub mod algebra_checks;
pub mod combinatorics;
pub mod cube;
pub mod decomposition;
pub mod error;
pub mod gen;
pub mod grid;
pub mod invariants;
pub mod linalg;
pub mod module;
pub mod rank_invariant;
pub mod recovery;

pub use cube::{cube_rank, order_cmp, CubeSpec};
pub use decomposition::{decompose, reconstruct, signed_rank, SignedCubeSet};
pub use error::{Error, Result};
pub use grid::GridBox;
pub use linalg::IntMatrix;
pub use module::{
    direct_sum, module_from_cubes, module_from_cubes_in, rank, rank_real, rank_table, validate,
    PersistenceModule, ValidationReport, Violation,
};
pub use rank_invariant::RankInvariant;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
