use thiserror::Error;

/// Error type shared by every module of the workbench.
///
/// The CLI maps variants onto process exit codes: configuration, domain,
/// parse, range, contract and singularity errors exit 1; `Infeasible`
/// exits 2; `Resource` and `Tolerance` exit 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("range error: {0}")]
    Range(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("singularity: {0}")]
    Singularity(String),

    #[error("analytically infeasible parameters: {0}")]
    Infeasible(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("tolerance not reached: requested {requested:e}, achieved {achieved:e} ({msg})")]
    Tolerance {
        requested: f64,
        achieved: f64,
        msg: String,
    },
}

impl Error {
    /// Process exit code the CLI uses for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Infeasible(_) => 2,
            Error::Resource(_) | Error::Tolerance { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
