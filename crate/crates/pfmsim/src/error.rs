//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mesh format error at line {line}: {msg}")]
    MeshFormat { line: usize, msg: String },

    #[error("element {element} references node {node} which does not exist")]
    DanglingNode { element: usize, node: usize },

    #[error("element {element} is inverted or degenerate (det J = {det_j:.3e} at quadrature point {gp})")]
    InvertedElement { element: usize, gp: usize, det_j: f64 },

    #[error("unsupported element kind/dimension combination: {0}")]
    UnsupportedElement(String),

    #[error("config error at `{key}`: {msg}")]
    Config { key: String, msg: String },

    #[error("linear system is singular near dof {dof}")]
    SingularMatrix { dof: usize },

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("return mapping did not converge (residual {residual:.3e})")]
    ReturnMap { residual: f64 },

    #[error("increment at t = {time:.6e} failed: {msg}")]
    Increment { time: f64, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("refusing to write series containing NaN at increment {increment}")]
    NanInSeries { increment: usize },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn config(key: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config { key: key.into(), msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
