use thiserror::Error;

/// Errors surfaced by the numerical routines.
///
/// Everything that can fail for a predictable mathematical or configuration
/// reason gets its own variant so callers (and the CLI) can distinguish bad
/// input from a genuine numerical breakdown.
#[derive(Debug, Error)]
pub enum Error {
    #[error("evaluation produced a non-finite value: {0}")]
    NonFiniteResult(String),

    #[error("operands live on different grids or band edges")]
    GridMismatch,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("imaginary part {0} exceeds the evaluation strip |Im z| <= {1}")]
    StripExceeded(f64, f64),

    #[error("truncation radius {radius} too small for |z| = {z_abs} (need radius >= 4|z|)")]
    RadiusTooSmall { radius: f64, z_abs: f64 },

    #[error("no sign change in bracket ({0}, {1}); zero localisation failed")]
    BracketFailure(f64, f64),

    #[error("zero at {0} is not simple: |phi'| = {1} below threshold")]
    NonSimpleZero(f64, f64),

    #[error("index {0} outside the stored sampling range |n| <= {1}")]
    IndexOutOfRange(i64, usize),

    #[error("grid too coarse: step {step} exceeds required {required}")]
    GridTooCoarse { step: f64, required: f64 },

    #[error("unsupported frame dimension K = {0}; only K = 2 and K = 3 are built in")]
    UnsupportedK(usize),

    #[error("lifting system is ill-conditioned (pivot {0:.3e})")]
    LiftingIllConditioned(f64),

    #[error("lifted matrix is rank deficient (leading eigenvalue {0:.3e})")]
    RankDeficient(f64),

    #[error("anchor sample vanishes in block {0}; phase chain breaks there")]
    AnchorVanishes(i64),

    #[error("no admissible amplitude for the auxiliary signal: {0}")]
    UScalingFailed(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed record at line {line}: {detail}")]
    Parse { line: usize, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
