use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("topological degree {degree} exceeds the cutoff {cutoff}")]
    CutoffExceeded { degree: u32, cutoff: u32 },

    #[error("derivation has no value on generator `{0}`")]
    MissingGeneratorValue(String),

    #[error("max_res_deg is undefined on the zero element")]
    ZeroElement,

    #[error("degree mismatch for `{what}`: expected {expected}, found {found}")]
    DegreeMismatch { what: String, expected: String, found: String },

    #[error("differential does not square to zero on {}", .0.join(", "))]
    SquareNonzero(Vec<String>),

    #[error("invalid presentation: {0}")]
    PresentationInvalid(String),

    #[error("cutoff {0} is too small to certify anything (need at least 2)")]
    CutoffTooSmall(u32),

    #[error("element is not a cycle: {0}")]
    NotACycle(String),

    #[error("map does not commute with the differentials on `{0}`")]
    NotChainMap(String),

    #[error("homology mismatch: {0}")]
    HomologyMismatch(String),

    #[error("could not reduce a class to resolution degree 0: {0}")]
    RepresentativeReductionFailed(String),

    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("derivation violates its declared resolution drop on `{0}`")]
    ResolutionDrop(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
