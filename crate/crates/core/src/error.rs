use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported ambient dimension {0}")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty input")]
    Empty,
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("vertex set is not a face of the polytope")]
    NotAFace,
    #[error("origin is not an interior point")]
    OriginNotInterior,
    #[error("first body is not contained in the second")]
    NotContained,
    #[error("direction {0} is not extreme for the given tuple")]
    NotExtreme(String),
    #[error("touching cone has dimension {0}, expected 1")]
    TouchingConeDimension(usize),
    #[error("direction is not orthogonal to the touching cone")]
    NotOrthogonal,
    #[error("cap construction leaks outside the cap; retry with a smaller epsilon")]
    CapLeak,
    #[error("point lies outside the domain box")]
    OutsideDomain,
    #[error("x lies in a planar region R")]
    InPlanarRegion,
    #[error("mixed Hessian measure is nonzero on the domain")]
    MeasureNonzero,
    #[error("no common kernel direction within tolerance")]
    NoCommonKernel,
    #[error("matrix is not positive semidefinite")]
    NotPsd,
    #[error("support function fails the homogeneity check")]
    NotHomogeneous,
    #[error("resolution {0} exceeds the supported maximum")]
    ResolutionTooLarge(usize),
    #[error("inverse sphere map requires a negative last coordinate")]
    UpperHemisphere,
    #[error("exact evaluation is not available at this point")]
    NotExact,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}
