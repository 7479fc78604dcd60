//! Exact computations with multicomplexes (twisted chain complexes) over a
//! field: spectral-sequence pages, witness functors and their representing
//! objects, lifting problems, cones and path objects, the dg algebra of
//! structure maps, scalar change and half-plane truncations.

pub mod bigraded;
pub mod cn;
pub mod constructions;
pub mod error;
pub mod exec;
pub mod field;
pub mod fixtures;
pub mod hom;
pub mod linalg;
pub mod model;
pub mod multicomplex;
pub mod random;
pub mod represent;
pub mod spectral;

pub use bigraded::{Bidegree, BigradedModule, GradedMap};
pub use error::{Error, Result};
pub use exec::Exec;
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use linalg::Matrix;
pub use multicomplex::{Bound, Morphism, Multicomplex};
