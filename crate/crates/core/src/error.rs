use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("support has {support} points but probs has {probs}")]
    LengthMismatch { support: usize, probs: usize },

    #[error("distribution needs at least 2 support points, got {0}")]
    TooFewPoints(usize),

    #[error("probs[{index}] = {value} is not strictly positive")]
    NonPositiveProb { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, expected 1 within 1e-12")]
    SumNotOne { sum: f64 },

    #[error("support[{index}] is not strictly greater than support[{}]", index - 1)]
    UnsortedSupport { index: usize },

    #[error("support[{index}] = {value} is not strictly positive")]
    NonPositiveSupport { index: usize, value: f64 },

    #[error("maximum lifetime r must be at least 2, got {0}")]
    InvalidR(usize),

    #[error("p and q are defined on different supports")]
    SupportMismatch,

    #[error("time index j = {j} is outside [1, {r}]")]
    IndexOutOfRange { j: usize, r: usize },

    #[error("residual quantity undefined at the terminal index j = {0} (empty tail)")]
    ResidualAtTerminal(usize),

    #[error("measure {0} needs a time index")]
    MissingIndex(&'static str),

    #[error("measure {0} needs the experimenter distribution q")]
    MissingQ(&'static str),

    #[error("observation {index} = {value} is not a support point")]
    ValueOutsideSupport { index: usize, value: f64 },

    #[error("sample is empty")]
    EmptySample,

    #[error("empirical survival at x_{0} is zero")]
    EmptyTail(usize),

    #[error("empirical cdf at x_{0} is zero")]
    EmptyHead(usize),

    #[error("empirical cell {0} is zero inside a logarithmic sum")]
    ZeroCellInRange(usize),

    #[error("asymptotic variance is negative ({0})")]
    NegativeVariance(f64),

    #[error("asymptotic variance is zero; cannot standardize")]
    ZeroVariance,

    #[error("no asymptotic theory is available for {0}")]
    UnsupportedMeasure(&'static str),

    #[error("need at least 2 draws, got {0}")]
    TooFewDraws(usize),

    #[error("every replication was skipped because of zero empirical cells")]
    AllReplicationsSkipped,

    #[error("invalid study: {0}")]
    InvalidStudy(String),

    #[error("{path}: {source}")]
    Field { path: String, source: Box<Error> },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Prefix an error with the location of the offending field.
    pub fn at(self, path: impl Into<String>) -> Error {
        let path = path.into();
        match self {
            Error::Field {
                path: inner,
                source,
            } => Error::Field {
                path: format!("{path}.{inner}"),
                source,
            },
            other => Error::Field {
                path,
                source: Box::new(other),
            },
        }
    }

    /// The innermost error, with any field paths stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Field { source, .. } => source.root(),
            other => other,
        }
    }

    /// Errors caused by the data (as opposed to an inadmissible request).
    pub fn is_data_dependent(&self) -> bool {
        matches!(
            self.root(),
            Error::EmptyTail(_) | Error::EmptyHead(_) | Error::ZeroCellInRange(_)
        )
    }
}
