//! Integral invariants `F_{a,b}` and power sums `p_{a,b}`.

pub mod basis;
pub mod closed_form;
pub mod features;
pub mod index;
pub mod oracle;

pub use basis::{diagonal_coefficient, expand_f, f_to_p_matrix, ChangeOfBasis};
pub use closed_form::{f_cube, f_interval_1d, f_signed, interval_expansion, p_cube, p_signed};
pub use features::{
    f_module, feature_vector, feature_vector_signed, feature_vector_with, p_module, Family,
    FeatureEntry, FeatureVector, Provenance,
};
pub use index::InvariantIndex;
pub use oracle::f_integral_oracle;
