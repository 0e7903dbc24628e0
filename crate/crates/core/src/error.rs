use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("degree {degree} out of range 0..={max}")]
    DegreeOutOfRange { degree: u32, max: u32 },

    #[error("quotient is not Artinian up to degree {0}")]
    NotArtinian(u32),

    #[error("generator set is not a Groebner basis")]
    NotGroebner,

    #[error("expected a monomial, found `{0}`")]
    NotMonomial(String),

    #[error("matrix is not skew-symmetric of odd size")]
    NotSkewOdd,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not defined for this case: {0}")]
    NotApplicable(String),

    #[error("no simultaneous permutation exhibits a zero {0}x{0} block")]
    NotBlockCertified(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
