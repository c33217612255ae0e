//! Exact field arithmetic and sparse polynomial algebra.

pub mod homogeneity;
pub mod poly;
pub mod scalar;
pub mod text;

pub use homogeneity::{
    binomial, degree_in_subset, detect_partial_homogeneity, dim_pol_hom, monomial_basis,
    VariablePartition,
};
pub use poly::{varlist, Monomial, SparsePoly};
pub use scalar::{parse_scalar, FieldTag, Scalar};
pub use text::{parse_field_spec, parse_poly, serialize_poly};
