use crate::lattice::Vector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid rational {0:?}")]
    ParseRational(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("basis vectors are linearly dependent")]
    DependentBasis,

    #[error("size bound exceeded: {0}")]
    SizeBound(String),

    #[error("polytope is unbounded")]
    UnboundedPolytope,

    #[error("operator is not monotone (x = {lower}, y = {upper})")]
    NotMonotone { lower: Vector, upper: Vector },

    #[error("precondition failed: {reason}")]
    Precondition { reason: String, witness: Option<Vector> },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn precondition(reason: impl Into<String>, witness: Option<Vector>) -> Self {
        Error::Precondition {
            reason: reason.into(),
            witness,
        }
    }

    pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found })
        }
    }
}
