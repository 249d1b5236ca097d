use thiserror::Error;

use crate::linalg::AffineSpace;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus is not irreducible over F_{0}")]
    NotIrreducible(u32),
    #[error("modulus degree {got} does not match extension degree {want}")]
    DegreeMismatch { want: usize, got: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("duplicate interpolation point")]
    DuplicatePoint,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("size {size} exceeds cap {cap}")]
    TooLarge { size: f64, cap: usize },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial degree {degree} is not below bound {bound}")]
    DegreeTooLarge { degree: usize, bound: usize },
    #[error("interpolation system has no nonzero solution")]
    InterpolationFailed,
    #[error("solution space of dimension {dimension} is too large to enumerate; use prune_list")]
    SolutionSpaceTooLarge { dimension: usize, space: Box<AffineSpace> },
    #[error("invalid parameters: {0}")]
    ParameterViolation(String),
    #[error("subspace design does not match the code: {0}")]
    DesignMismatch(String),
    #[error("lattice basis is singular")]
    SingularBasis,
    #[error("zero direction")]
    ZeroDirection,
    #[error("advice space exceeds {0} candidates")]
    AdviceSpaceTooLarge(usize),
    #[error("radius out of range")]
    RadiusOutOfRange,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("too many sets: {0} (limit 20)")]
    TooManySets(usize),
    #[error("vectors are not an F_2 basis")]
    NotF2Basis,
    #[error("dimension out of range: {0}")]
    DimensionOutOfRange(String),
    #[error("polynomials are linearly dependent")]
    LinearlyDependent,
    #[error("bad corruption positions: {0}")]
    BadPositions(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
