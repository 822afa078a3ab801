use thiserror::Error;

/// Errors raised by the library. Every variant has a stable machine-readable
/// code, see [`Error::code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different coefficient fields")]
    MixedFields,
    #[error("division would need a non-monomial or non-invertible denominator: {0}")]
    NonMonomialDenominator(String),
    #[error("{element} is not a q^{power}-th power, cannot twist by -{power}")]
    NotAQthPower { element: String, power: u32 },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("leading coefficient is zero")]
    ZeroLeading,
    #[error("a Drinfeld module needs rank at least 1")]
    RankZero,
    #[error("not a t-module: {0}")]
    NotATModule(String),
    #[error("not a morphism, residual f*src_t - dst_t*f = {residual}")]
    NotAMorphism { residual: String },
    #[error("unsupported reduction regime: {0}")]
    UnsupportedRegime(String),
    #[error("leading matrix of the source is singular")]
    SingularLeading,
    #[error("classes belong to different (source, target) pairs")]
    MixedPairs,
    #[error("search space is unbounded: {0}")]
    UnboundedSearch(String),
    #[error("carrier of size {size} exceeds the enumeration ceiling {ceiling}")]
    CarrierTooLarge { size: u128, ceiling: u128 },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::MixedFields => "MixedFields",
            Error::NonMonomialDenominator(_) => "NonMonomialDenominator",
            Error::NotAQthPower { .. } => "NotAQthPower",
            Error::InvalidField(_) => "InvalidField",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::ZeroLeading => "ZeroLeading",
            Error::RankZero => "RankZero",
            Error::NotATModule(_) => "NotATModule",
            Error::NotAMorphism { .. } => "NotAMorphism",
            Error::UnsupportedRegime(_) => "UnsupportedRegime",
            Error::SingularLeading => "SingularLeading",
            Error::MixedPairs => "MixedPairs",
            Error::UnboundedSearch(_) => "UnboundedSearch",
            Error::CarrierTooLarge { .. } => "CarrierTooLarge",
            Error::Parse { .. } => "ParseError",
        }
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
