use crate::statevec::{BasisLabel, Subsystem};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("basis mismatch at index {index}: expected {expected}, found {found}")]
    BasisMismatch {
        index: usize,
        expected: BasisLabel,
        found: BasisLabel,
    },

    #[error("bases have different lengths: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("tensor factors share subsystem {0}")]
    SubsystemOverlap(Subsystem),

    #[error("state is not normalized: |psi|^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("projector set incomplete on its basis: defect {defect}")]
    IncompleteProjectors { defect: f64 },

    #[error("projector vectors not orthonormal: defect {defect}")]
    NonOrthonormalProjectors { defect: f64 },

    #[error("outcome has vanishing probability: {prob}")]
    ZeroProbability { prob: f64 },

    #[error("subsystem set {0:?} is not a factor of the basis")]
    InvalidFactor(Vec<Subsystem>),

    #[error("mixture weights invalid: {0}")]
    InvalidMixture(String),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("chain is at stage {found}, operation requires {required}")]
    StageMismatch {
        required: &'static str,
        found: &'static str,
    },

    #[error("operation `{op}` is not defined for variant {variant}")]
    UnsupportedVariant { op: &'static str, variant: String },

    #[error("negative dephasing width: sigma = {0}")]
    NegativeSigma(f64),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("not enough data: {0}")]
    InsufficientData(String),

    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, SimError>;
