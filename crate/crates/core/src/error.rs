use thiserror::Error;

use crate::discrete_sets::{LnatViolation, MnatViolation};
use crate::exact_geometry::RationalPoint;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad classification used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input or violated precondition.
    Usage,
    /// The mathematics rejects the input (point outside a hull, set outside a class).
    Domain,
    /// An enumeration or size limit was exceeded.
    Resource,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("empty lattice set")]
    EmptySet,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("point {point} is not in the convex hull of the Minkowski sum")]
    OutsideHull { point: RationalPoint },

    #[error("summand {index} is not integrally convex: {witness} has no certificate in its local convex hull")]
    NotIntegrallyConvex { index: usize, witness: RationalPoint },

    #[error("summand {index} is not M-natural-convex: {violation}")]
    NotMnatConvex { index: usize, violation: MnatViolation },

    #[error("summand {index} is not L-natural-convex: {violation}")]
    NotLnatConvex { index: usize, violation: LnatViolation },

    #[error("enumeration budget exceeded: {required} candidates > budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("size limit exceeded: {what} is {actual}, limit {limit}")]
    SizeLimit {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::DimensionMismatch { .. }
            | Error::Shape(_)
            | Error::EmptySet
            | Error::InvalidArgument(_)
            | Error::InvalidCertificate(_) => ErrorKind::Usage,
            Error::OutsideHull { .. }
            | Error::NotIntegrallyConvex { .. }
            | Error::NotMnatConvex { .. }
            | Error::NotLnatConvex { .. } => ErrorKind::Domain,
            Error::BudgetExceeded { .. } | Error::SizeLimit { .. } => ErrorKind::Resource,
        }
    }
}
