//! circkit: exact-arithmetic toolkit for arithmetic circuits and sparse
//! multivariate polynomials.
//!
//! The crate provides, over exact scalars (arbitrary-precision rationals or
//! prime residues):
//!
//! * a labeled-DAG circuit representation with evaluation, expansion to
//!   polynomials, affine input substitution, and gradient construction;
//! * a normalization pipeline that rewrites any circuit with homogeneous
//!   outputs into a leveled alternating normal form with audited size bounds;
//! * a universal leveled circuit-graph into which every normal-form circuit
//!   embeds, with symbolic edge-label polynomials;
//! * extraction of coefficient families from partially homogeneous
//!   polynomials, with the permanent as the worked example; and
//! * elusiveness certificates — dimension- and rank-based obstructions that
//!   translate into circuit-size lower bounds.
//!
//! Start with the `examples/` directory; each example exercises one of the
//! capabilities end to end and prints what it checks. The `circkit` binary
//! exposes the same operations as subcommands over text-format files.

pub mod algebra;
pub mod circuit;
pub mod cli;
pub mod elusive;
pub mod error;
pub mod families;
pub mod normal;
pub mod report;
pub mod universal;

pub use error::{Error, Result};
