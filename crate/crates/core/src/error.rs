use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("terms of unequal degree: {first} and {second}")]
    MixedDegree { first: u32, second: u32 },

    #[error("unknown variable x{index} (ambient dimension n = {n})")]
    UnknownVariable { index: usize, n: usize },

    #[error("at most {max} variables are supported, got {got}")]
    TooManyVariables { got: usize, max: usize },

    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeOverflow { degree: u32, max: u32 },

    #[error("{p} is not prime")]
    NotPrime { p: u64 },

    #[error("prime {p} is too small: need p > {bound}")]
    PrimeTooSmall { p: u64, bound: u64 },

    #[error("prime {p} divides a coefficient denominator")]
    BadPrime { p: u64 },

    #[error("degree too small: {message}")]
    DegreeTooSmall { message: String },

    #[error("no stabilization up to {bound}: {what}")]
    NoStabilization { what: String, bound: usize },

    #[error("scan exhausted at bound {bound} without a nonzero component")]
    ScanExhausted { bound: usize },

    #[error("point {point} is not a singular point of the hypersurface")]
    NotSingular { point: String },

    #[error("deformation subspace is not effective: it meets J(f)_d in dimension {overlap}")]
    NotEffective { overlap: usize },

    #[error("unsupported ambient dimension n = {n}: {reason}")]
    UnsupportedDimension { n: usize, reason: String },

    #[error("degenerate point: all coordinates are zero")]
    DegeneratePoint,

    #[error("fixtures have mixed parameters: {message}")]
    MixedParameters { message: String },

    #[error("fields disagree on {what}: {values}")]
    FieldDisagreement { what: String, values: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("fixture generation failed after {attempts} attempts: {reason}")]
    FixtureGeneration { attempts: usize, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::MixedDegree { .. } => "mixed_degree",
            Error::UnknownVariable { .. } => "unknown_variable",
            Error::TooManyVariables { .. } => "too_many_variables",
            Error::DegreeOverflow { .. } => "degree_overflow",
            Error::NotPrime { .. } => "not_prime",
            Error::PrimeTooSmall { .. } => "prime_too_small",
            Error::BadPrime { .. } => "bad_prime",
            Error::DegreeTooSmall { .. } => "degree_too_small",
            Error::NoStabilization { .. } => "no_stabilization",
            Error::ScanExhausted { .. } => "scan_exhausted",
            Error::NotSingular { .. } => "not_singular",
            Error::NotEffective { .. } => "not_effective",
            Error::UnsupportedDimension { .. } => "unsupported_dimension",
            Error::DegeneratePoint => "degenerate_point",
            Error::MixedParameters { .. } => "mixed_parameters",
            Error::FieldDisagreement { .. } => "field_disagreement",
            Error::Invalid(_) => "invalid",
            Error::FixtureGeneration { .. } => "fixture_generation",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
