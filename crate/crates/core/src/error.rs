use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum KoshError {
    #[error("bracket failure while solving for root n = {n} (p = {p})")]
    BracketFailure { n: usize, p: f64 },
    #[error("non-convergence in {what}: estimate {estimate:e}, error {error:e}")]
    NonConvergence {
        what: &'static str,
        estimate: f64,
        error: f64,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole at {0}")]
    Pole(String),
    #[error("critical strip: {0}")]
    Strip(String),
    #[error("inconsistent pole: residue estimates {r1:e} and {r2:e} disagree")]
    InconsistentPole { r1: f64, r2: f64 },
    #[error("no sign change on the requested interval")]
    NoSignChange,
    #[error("unknown identity id `{0}`")]
    UnknownId(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("report format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, KoshError>;

impl KoshError {
    pub fn domain(msg: impl Into<String>) -> Self {
        KoshError::Domain(msg.into())
    }
}

impl From<std::io::Error> for KoshError {
    fn from(e: std::io::Error) -> Self {
        KoshError::Io(e.to_string())
    }
}
