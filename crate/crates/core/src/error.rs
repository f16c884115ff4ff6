use thiserror::Error;

use crate::statevec::BasisLabel;

#[derive(Debug, Error)]
pub enum QssError {
    #[error("{0} qubits requested; at most 4 are supported")]
    TooManyQubits(usize),
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("amplitude count {0} is not a power of two")]
    BadLength(usize),
    #[error("amplitudes contain NaN or infinity")]
    NonFinite,
    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),
    #[error("invalid basis label `{0}`")]
    InvalidLabel(String),
    #[error("invalid eigen-axis `{0}`; expected one of +, -, +i, -i")]
    InvalidAxis(String),
    #[error("catalog index {0} is outside 1..=64")]
    CatalogIndex(usize),
    #[error("override {label} is not among the tied outcomes {tied}")]
    OverrideNotTied { label: BasisLabel, tied: String },
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error(
        "secret must be a non-empty binary string whose length is a multiple of 3 (got `{0}`)"
    )]
    SecretFormat(String),
    #[error("secret chunk {0} is not a message code")]
    ChunkNotMessage(BasisLabel),
    #[error("qubit position {0} is invalid; expected 1, 2 or 3")]
    QubitPosition(usize),
    #[error("basis is empty")]
    EmptyBasis,
    #[error("basis has {found} vectors but the space has dimension {dim}")]
    IncompleteBasis { found: usize, dim: usize },
    #[error("basis is not orthonormal (max |G - I| = {0:.3e}); inspect gram_check")]
    NonOrthonormal(f64),
    #[error("tables differ in length: {computed} computed rows vs {reference} reference rows")]
    TableLength { computed: usize, reference: usize },
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("{what}, line {line}: {msg}")]
    Parse {
        what: &'static str,
        line: usize,
        msg: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, QssError>;
