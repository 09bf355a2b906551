//! Homotopy types of components of the space of long knots in R^3.
//!
//! From a companionship-tree description of a knot the library produces
//! the homotopy-type expression of its component, the symmetry group A_f
//! at each splice vertex, invertibility decisions, the fundamental-group
//! structure, exact first homology, and the Gramain pairing.  All group
//! theory runs in exact integer arithmetic.

pub mod error;
pub mod expr;
pub mod group;
pub mod io;
pub mod knot;
pub mod oracle;
pub mod symmetry;

#[doc(hidden)]
pub mod testgen;

pub use error::{GroupError, KnotError, ParseError, SchemaError, ValidationReport, Violation};
pub use expr::{dimension, homotopy_type, render, simplify, HomotopyExpr, MonodromyDatum, SetPartition};
pub use group::fp::{FpGroup, H1Result};
pub use knot::{normalize, validate, Catalog, CatalogEntry, KglDatum, KnotTree, Orientation};
pub use symmetry::signed_perm::{Sign, SignedPerm};
pub use symmetry::{canonical_form, classes_equal, compute_af, invert_class, is_invertible, CyclicSubgroup};

/// Exact integer matrices as used throughout the library.
pub type IntMatrix = group::matrix::Matrix<num_bigint::BigInt>;
