use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("negative argument {0}")]
    NegativeArgument(i64),
    #[error("binomial [{n} choose {k}] out of range")]
    BinomialRange { n: i64, k: i64 },

    #[error("matrix is not square")]
    NotSquare,
    #[error("not a generalized Cartan matrix: {0}")]
    NotGcm(String),
    #[error("symmetrizers do not symmetrize: eps_{i} a_{i}{j} != eps_{j} a_{j}{i}")]
    NotSymmetrizable { i: usize, j: usize },
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("negative weight {0:?} where a grading is required")]
    NegativeWeight(Vec<i64>),

    #[error("arrow {0} is a loop")]
    LoopArrow(usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("automorphism is not compatible with source/target at arrow {0}")]
    NotCompatible(usize),
    #[error("arrow {0} joins two vertices of the same orbit")]
    NotAdmissible(usize),
    #[error("unknown orbit {0}")]
    UnknownOrbit(usize),
    #[error("orbit {0} is neither a sink nor a source")]
    NotSinkOrSource(usize),

    #[error("elements live over different Cartan data")]
    DatumMismatch,
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("weight height {height} exceeds the bound {bound}")]
    ResourceLimit { height: i64, bound: i64 },
    #[error("element is not in the subalgebra {0}")]
    NotInSubalgebra(String),
    #[error("linear system has no solution")]
    InconsistentSystem,
    #[error("unsupported class symbol {0}")]
    UnsupportedSymbol(String),
    #[error("class contexts differ")]
    ContextMismatch,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable name, used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroDenominator => "ZeroDenominator",
            Error::NegativeArgument(_) => "NegativeArgument",
            Error::BinomialRange { .. } => "BinomialRange",
            Error::NotSquare => "NotSquare",
            Error::NotGcm(_) => "NotGCM",
            Error::NotSymmetrizable { .. } => "NotSymmetrizable",
            Error::RankMismatch { .. } => "RankMismatch",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::NegativeWeight(_) => "NegativeWeight",
            Error::LoopArrow(_) => "LoopArrow",
            Error::InvalidPermutation(_) => "InvalidPermutation",
            Error::NotCompatible(_) => "NotCompatible",
            Error::NotAdmissible(_) => "NotAdmissible",
            Error::UnknownOrbit(_) => "UnknownOrbit",
            Error::NotSinkOrSource(_) => "NotSinkOrSource",
            Error::DatumMismatch => "DatumMismatch",
            Error::Inhomogeneous => "Inhomogeneous",
            Error::ResourceLimit { .. } => "ResourceLimit",
            Error::NotInSubalgebra(_) => "NotInSubalgebra",
            Error::InconsistentSystem => "InconsistentSystem",
            Error::UnsupportedSymbol(_) => "UnsupportedSymbol",
            Error::ContextMismatch => "ContextMismatch",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}
