use thiserror::Error;

/// Errors produced by body constructors, the optimizer, and the
/// verification layers. The CLI maps these onto its exit-code contract
/// (input = 2, verification/construction = 3, non-convergence = 4).
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("search failed: {0}")]
    Search(String),

    #[error("optimizer did not converge within {max_iters} iterations (best {best})")]
    NonConvergence { max_iters: usize, best: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn verification(msg: impl Into<String>) -> Self {
        Error::Verification(msg.into())
    }

    pub fn construction(msg: impl Into<String>) -> Self {
        Error::Construction(msg.into())
    }

    pub fn search(msg: impl Into<String>) -> Self {
        Error::Search(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
