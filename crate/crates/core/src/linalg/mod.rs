//! Dense exact linear algebra over a [`Field`](crate::field::Field).

pub mod matrix;
pub mod subspace;
pub mod vector;

pub use matrix::{rref, rref_with_order, Echelon, Matrix};
pub use subspace::{check_certificate, solve, Solve, Subquotient, Subspace};
