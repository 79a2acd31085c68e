use thiserror::Error;

use crate::linalg::Field;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: Field, found: Field },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("image not contained in kernel")]
    ImageNotInKernel,
    #[error("not a complex: d_{degree} . d_{} != 0", degree + 1)]
    NotAComplex { degree: i64 },
    #[error("not a chain map: sign-commutation fails at degree {degree}")]
    NotAChainMap { degree: i64 },
    #[error("not a cocycle in degree {degree}")]
    NotACocycle { degree: usize },
    #[error("instance mismatch")]
    InstanceMismatch,
    #[error("degree {needed} exceeds the computed range {max}; increase N")]
    DegreeOverflow { needed: usize, max: usize },
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("not an algebra: {0}")]
    NotAnAlgebra(String),
    #[error("not a module: {0}")]
    NotAModule(String),
    #[error("resolution is not exact at degree {degree}")]
    NotExact { degree: usize },
    #[error("lifting failed at degree {degree}: target is not exact there")]
    LiftFailed { degree: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("wrong context: {0}")]
    WrongContext(String),
}
