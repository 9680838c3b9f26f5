use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum ExpError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{failed} of {total} units failed for lack of precision (budget {budget:.0}%); first: {first}")]
    Precision {
        failed: usize,
        total: usize,
        budget: f64,
        first: String,
    },
    #[error("{0}")]
    Compute(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl ExpError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            ExpError::Config(_) => ExitCode::from(2),
            ExpError::Precision { .. } => ExitCode::from(3),
            ExpError::Compute(_) | ExpError::Io(_) => ExitCode::from(1),
        }
    }
}

pub(crate) fn config<E: std::fmt::Display>(e: E) -> ExpError {
    ExpError::Config(e.to_string())
}

pub(crate) fn compute<E: std::fmt::Display>(e: E) -> ExpError {
    ExpError::Compute(e.to_string())
}
