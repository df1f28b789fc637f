use std::fmt;
use std::path::Path;

/// Failure graded by exit code: usage errors (1) are bad invocations, data
/// errors (2) are problems with the input files or their contents, internal
/// errors (3) mean the pipeline violated one of its own invariants.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<dlfm::io::IoError> for CliError {
    fn from(e: dlfm::io::IoError) -> CliError {
        CliError::Data(e.to_string())
    }
}

impl From<dlfm::analysis::AnalysisError> for CliError {
    fn from(e: dlfm::analysis::AnalysisError) -> CliError {
        CliError::Data(e.to_string())
    }
}

/// Wrap a failed write of an output file.
pub fn write_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Data(format!("cannot write {}: {e}", path.display()))
}
