use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid geometry input (non-dividing layer thickness, empty segment
    /// list, negative radii, ...).
    #[error("geometry: {0}")]
    Geometry(String),

    /// Material or domain classification problem, e.g. no conductive path
    /// between the ports.
    #[error("materials: {0}")]
    Materials(String),

    /// Argument outside the validated domain of an analytic routine.
    #[error("analytic domain: {0}")]
    Domain(String),

    /// Iterative or direct solver failure (breakdown, max iterations,
    /// indefiniteness).
    #[error("solver: {0}")]
    Solver(String),

    /// Config file rejected; `line` is 1-based.
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    /// Run-level validation (bad tolerance, unknown preset, ...).
    #[error("invalid run setup: {0}")]
    Setup(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
