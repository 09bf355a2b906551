//! Exact computation of fundamental-group structure, homology, and the
//! Gramain pairing: integer matrices with Smith normal form, finitely
//! presented groups, coset enumeration with Reidemeister-Schreier
//! rewriting, and the induced inversion action on homology.

pub mod braid;
pub mod coset;
pub mod fp;
pub mod gramain;
pub mod h1;
pub mod matrix;
