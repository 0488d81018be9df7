use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid space size {0}: must be finite, at least 1 and at most 1e30")]
    InvalidSpace(f64),

    #[error("invalid population {0}: must be a non-negative integer")]
    InvalidPopulation(String),

    #[error("invalid target probability {0}: must lie strictly between 0 and 1")]
    InvalidTarget(f64),

    #[error("invalid tolerance {0}: must be positive and finite")]
    InvalidTolerance(f64),

    #[error("invalid series order {0}: must be between 2 and {max}", max = crate::collision::MAX_SERIES_ORDER)]
    InvalidOrder(u32),

    #[error(
        "population {population} exceeds the iteration budget of {budget}; use the series method"
    )]
    BudgetExceeded { population: u64, budget: u64 },

    #[error("series not certified for p/t = {ratio}: requires p/t < 1/2")]
    SeriesNotCertified { ratio: f64 },

    #[error("{0} requires {1}")]
    Precondition(&'static str, &'static str),

    #[error("space size overflows 1e30: {0}")]
    SpaceOverflow(String),

    #[error("no root below 1e30 for population {population} at target {target}")]
    RootOutOfRange { population: u64, target: f64 },

    #[error("dataset: {0}")]
    Dataset(#[from] DatasetError),

    #[error("record '{name}': {source}")]
    Record { name: String, source: Box<Error> },
}

impl Error {
    /// True for errors caused by malformed input text rather than invalid values.
    pub fn is_data_error(&self) -> bool {
        matches!(self, Error::Dataset(_))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DatasetError {
    #[error("input is empty")]
    Empty,

    #[error("header has no '{0}' column")]
    MissingColumn(&'static str),

    #[error("line {line}: {message}")]
    Row { line: u64, message: String },

    #[error("line {line}: duplicate name '{name}' (first seen on line {first_line})")]
    DuplicateName {
        name: String,
        line: u64,
        first_line: u64,
    },

    #[error("{0}")]
    Io(String),
}
