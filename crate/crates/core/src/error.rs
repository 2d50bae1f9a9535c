use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("group order exceeds bound {bound}")]
    GroupTooLarge { bound: usize },
    #[error("subgroup does not belong to this group")]
    SubgroupMismatch,
    #[error("element is not in the group")]
    ElementNotInGroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroup is not normal in the intermediate group")]
    NotNormalInN,
    #[error("characters belong to different groups")]
    GroupMismatch,
    #[error("expected a non-negative integer, got {0}")]
    NonIntegralResult(String),
    #[error("Riemann-Hurwitz genus is not an integer: {0}")]
    NonIntegerGenus(String),
    #[error("Riemann-Hurwitz genus is negative: {0}")]
    NegativeGenus(String),
    #[error("invalid generating vector: {0}")]
    InvalidVector(String),
    #[error("unsupported signature: {0}")]
    UnsupportedSignature(String),
    #[error("ramification over a base point is not uniform")]
    InconsistentRamification,
    #[error("Chevalley-Weil multiplicity is not a non-negative integer: {0}")]
    NonIntegralMultiplicity(String),
    #[error("subgroup must be proper and non-trivial")]
    NotProperNontrivial,
    #[error("quotient surface has genus zero")]
    GenusZeroQuotient,
    #[error("invalid isogeny relation: {0}")]
    InvalidRelation(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("no generating vector found for signature {0}")]
    VectorNotFound(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code for reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidPermutation(_) => "InvalidPermutation",
            Error::GroupTooLarge { .. } => "GroupTooLarge",
            Error::SubgroupMismatch => "SubgroupMismatch",
            Error::ElementNotInGroup => "ElementNotInGroup",
            Error::NotNormal => "NotNormal",
            Error::NotNormalInN => "NotNormalInN",
            Error::GroupMismatch => "GroupMismatch",
            Error::NonIntegralResult(_) => "NonIntegralResult",
            Error::NonIntegerGenus(_) => "NonIntegerGenus",
            Error::NegativeGenus(_) => "NegativeGenus",
            Error::InvalidVector(_) => "InvalidVector",
            Error::UnsupportedSignature(_) => "UnsupportedSignature",
            Error::InconsistentRamification => "InconsistentRamification",
            Error::NonIntegralMultiplicity(_) => "NonIntegralMultiplicity",
            Error::NotProperNontrivial => "NotProperNontrivial",
            Error::GenusZeroQuotient => "GenusZeroQuotient",
            Error::InvalidRelation(_) => "InvalidRelation",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::VectorNotFound(_) => "VectorNotFound",
            Error::Parse(_) => "Parse",
        }
    }

    /// True for errors caused by a configured size bound.
    pub fn is_resource_bound(&self) -> bool {
        matches!(self, Error::GroupTooLarge { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
