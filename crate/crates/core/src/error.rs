use thiserror::Error;

use crate::bigraded::Bidegree;
use crate::field::FieldSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported field `{0}` (expected gf<p> for a prime p, or q)")]
    BadField(String),
    #[error("cannot parse scalar `{0}`")]
    BadScalar(String),
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldSpec, right: FieldSpec },
    #[error("bound mismatch: {0}")]
    BoundMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("boundaries are not contained in cycles")]
    ContainmentViolation,
    #[error("map is not well defined on the quotient: {0}")]
    IllDefined(String),
    #[error("window too small at {at}: page {r} needs pmin <= {needed_pmin}, object is exact only above {horizon}")]
    WindowTooSmall {
        at: Bidegree,
        r: usize,
        needed_pmin: i64,
        horizon: i64,
    },
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("colimit did not stabilize on the window by s = {s_max}")]
    NotStabilized { s_max: usize },
    #[error("not a valid multicomplex: {0}")]
    InvalidMulticomplex(String),
    #[error("not a valid morphism: {0}")]
    InvalidMorphism(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
