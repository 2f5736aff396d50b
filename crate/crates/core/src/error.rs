use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter constraint violated: {0}")]
    Params(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("polynomial is not Hermitian-symmetric: {0}")]
    NotHermitian(String),
    #[error("not a smooth point: gradient vanishes at {0}")]
    NotSmooth(String),
    #[error("graph form unavailable: w-coordinate of the base point is zero")]
    GraphUnavailable,
    #[error("not normalized: common factor detected on {hits} of {lines} random lines")]
    NotNormalized { hits: usize, lines: usize },
    #[error("Q_p inside pole set: denominator restricts to the zero polynomial")]
    InsidePoleSet,
    #[error("degenerate configuration; perturb p0 ({0})")]
    Degenerate(String),
    #[error("hypothesis violated, witness direction {0}")]
    HypothesisViolated(String),
    #[error("refine loop: {0}")]
    RefineLoop(String),
    #[error("sampling failed: {0}")]
    Sampling(String),
    #[error("irrational coefficient required: {0}")]
    Irrational(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
