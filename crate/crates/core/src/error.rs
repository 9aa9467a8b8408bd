use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Location of the nearest pole of a meromorphic evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleReport {
    pub is_pole: bool,
    pub nearest_pole: Complex64,
    pub distance: f64,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("pole: argument within {distance:e} of {nearest}", distance = .0.distance, nearest = .0.nearest_pole)]
    Pole(PoleReport),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("label ({l}, {l2}) is not admissible for delta = {delta}")]
    Admissibility { l: u32, l2: u32, delta: i64 },
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("resource budget exceeded: {0}")]
    Budget(String),
    #[error("integral diverges: {0}")]
    Divergence(String),
    #[error("space tag mismatch: {0}")]
    SpaceTag(String),
    #[error("point outside the domain box: {0}")]
    Domain(String),
    #[error("evaluation at a singular point: {0}")]
    Singular(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("convergence not observed: {0}")]
    Convergence(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
