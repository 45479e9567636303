//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {n} outside supported range [{min}, {max}]")]
    Size { n: usize, min: usize, max: usize },

    #[error("qubit index {index} out of range for {n_qubits}-qubit state")]
    Index { index: usize, n_qubits: usize },

    #[error("invalid gate: {reason}")]
    Gate { reason: String },

    #[error("qubit count mismatch: circuit has {circuit}, state has {state}")]
    Shape { circuit: usize, state: usize },

    #[error("Kraus set is not trace preserving (completeness deviation {deviation:.3e})")]
    Channel { deviation: f64 },

    #[error("parameter {name} = {value} outside [{min}, {max}]")]
    Parameter {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("empty input: {what}")]
    EmptyInput { what: &'static str },

    #[error("{points} phase points cannot resolve harmonic {harmonic}; need more than {}", 2 * harmonic)]
    PhaseGrid { points: usize, harmonic: usize },

    #[error("config error: {key}: {message}")]
    Config { key: String, message: String },

    #[error("sweep point {label} failed: {source}")]
    SweepPoint { label: String, source: Box<Error> },

    #[error("I/O error at {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl Error {
    pub fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    /// True for errors the CLI maps to exit code 1 (bad configuration);
    /// everything else is an engine failure (exit code 2).
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
