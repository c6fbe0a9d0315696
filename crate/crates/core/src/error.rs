use thiserror::Error;

use crate::game::JointAction;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("joint action ({}, {}) outside a {rows}x{cols} game", .action.a1, .action.a2)]
    ActionOutOfBounds {
        action: JointAction,
        rows: usize,
        cols: usize,
    },

    #[error("degenerate reward range: lo = {lo}, hi = {hi}")]
    DegenerateRange { lo: f64, hi: f64 },

    #[error("reward sample {0} outside [0, 1]")]
    SampleOutOfRange(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("linear program failed: {0}")]
    Solver(String),

    #[error("malformed trace: {0}")]
    Trace(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("game file: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Json(_) | Error::Trace(_) | Error::InvalidGame(_) => 2,
            Error::Solver(_) => 3,
            _ => 1,
        }
    }
}
