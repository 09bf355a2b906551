//! Input/output surfaces: the knot DSL and the structural `kspace-v1`
//! document format.

pub mod dsl;
pub mod serial;
