use thiserror::Error;

use crate::exact::LaurentPoly;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} must be positive, got {value}")]
    NonPositive { what: &'static str, value: i64 },

    #[error("genus must be at least 2, got {0}")]
    GenusTooSmall(u32),

    #[error("codegree of the zero polynomial is undefined")]
    ZeroPolynomial,

    #[error("cannot evaluate a Laurent polynomial with negative exponents at q = 0")]
    ZeroEvaluationPoint,

    /// Refined multiplicity whose exponents did not come out integral.
    /// The offending polynomial is kept for inspection.
    #[error("vertex multiplicities are inconsistent with the gcd: result has non-integral exponents ({0})")]
    NonIntegralExponents(Box<LaurentPoly>),

    #[error("operation requires integral exponents")]
    FractionalExponent,

    #[error("a genus {genus} curve has {expected} trivalent vertices, got {got}")]
    VertexCount { genus: u32, expected: usize, got: usize },

    #[error("Eisenstein index must be even and at least 2, got {0}")]
    BadEisensteinIndex(u32),

    #[error("need at least {needed} sample points for degree bound {degree_bound}, got {got}")]
    TooFewPoints { needed: usize, degree_bound: usize, got: usize },

    #[error("duplicate abscissa n = {0}")]
    DuplicateAbscissa(i64),

    /// Verification point disagreed with the interpolant: the samples are not
    /// values of a polynomial of the claimed degree.
    #[error("samples are not polynomial of degree <= {degree_bound}: mismatch at n = {at}")]
    NotPolynomial { degree_bound: usize, at: i64 },

    #[error("stabilization not reached for g = {genus}, i = {codegree} after {attempts} attempts")]
    StabilizationExhausted { genus: u32, codegree: u32, attempts: u32 },

    #[error("no closed formula for codegree {0} (only 0, 1, 2)")]
    UnsupportedCodegree(u32),

    #[error("polarization matrix must have positive determinant, got {0}")]
    NonPositiveDeterminant(i64),

    #[error("determinant {det} is not divisible by the squared divisibility {r}^2")]
    IncompatibleDivisibility { det: u64, r: u64 },

    #[error("malformed encoding: {0}")]
    Decode(String),
}
