use std::fmt;

use overlap_core::Error as CoreError;

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_DATA: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    /// Text that does not parse as the expected kind of value.
    Parse(String),
    /// Well-formed input outside the domain of the computation.
    Domain(CoreError),
    /// Unreadable or malformed dataset.
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Data(_) => EXIT_DATA,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        if e.is_data_error() {
            CliError::Data(e.to_string())
        } else {
            CliError::Domain(e)
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(msg) => write!(f, "parse error: {msg}"),
            CliError::Domain(e) => write!(f, "domain error: {e}"),
            CliError::Data(msg) => write!(f, "data error: {msg}"),
        }
    }
}
