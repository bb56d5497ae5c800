//! Crate-wide error type.

use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

/// State captured when a slice-sampling transition exhausts its proposal
/// budget without finding an acceptable point.
#[derive(Debug, Clone)]
pub struct StuckInfo {
    /// Where the failure happened (parameter name, sweep index) when known.
    pub context: String,
    /// Current point the step started from.
    pub x0: f64,
    /// Slice level drawn for this transition (log scale).
    pub level: f64,
    /// Bracket at the time of failure.
    pub lo: f64,
    pub hi: f64,
    /// Number of proposals consumed.
    pub proposals: u32,
}

impl fmt::Display for StuckInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: x0={}, level={}, bracket=[{}, {}], proposals={}",
            self.context, self.x0, self.level, self.lo, self.hi, self.proposals
        )
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Parameter values violate a domain invariant (non-positive scale or shape,
    /// non-finite entries, ...).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// An evaluation point lies outside the support of the requested function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested quantity is not defined at this input (e.g. the absolutely
    /// continuous density on the standardized diagonal).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A data file failed to parse.
    #[error("data error{}: {message}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    Data {
        line: Option<usize>,
        message: String,
    },

    /// A serialized artifact has the wrong version header or is corrupt.
    #[error("format error: {0}")]
    Format(String),

    /// A run configuration is inconsistent or unusable.
    #[error("config error: {0}")]
    Config(String),

    /// A slice-sampling transition could not complete within its budgets.
    #[error("sampler stuck: {0}")]
    SamplerStuck(StuckInfo),

    /// The chain reached a state violating its invariants.
    #[error("chain invariant violated at iteration {iteration}: {message}")]
    ChainInvariant { iteration: usize, message: String },

    /// A study exceeded its replicate failure budget.
    #[error("study aborted at replicate {replicate}: {source}")]
    StudyAborted {
        replicate: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn data(line: usize, message: impl Into<String>) -> Self {
        Error::Data {
            line: Some(line),
            message: message.into(),
        }
    }
}
