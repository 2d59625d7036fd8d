use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("point ({0}, {1}, {2}) is not on the unit sphere (|norm - 1| = {3:e})")]
    NotUnit(f64, f64, f64, f64),
    #[error("projected point ({0}, {1}) lies outside the unit disk")]
    OutsideDisk(f64, f64),
    #[error("angle {0} outside [0, pi/2]")]
    AngleOutOfRange(f64),
    #[error("endpoints are antipodal; the great-circle arc is ambiguous")]
    Antipodal,
    #[error("step {0} degrees outside (0, 10]")]
    BadStep(f64),
    #[error("zero direction [000]")]
    ZeroDirection,
    #[error("design has no points")]
    EmptyDesign,
    #[error("weights sum to {0}, expected 1")]
    WeightSum(f64),
    #[error("invalid weight {0}")]
    BadWeight(f64),
    #[error("inconsistent design: {0}")]
    InvalidDesign(String),
    #[error("degree {0} exceeds the supported maximum {1}")]
    DegreeTooHigh(usize, usize),
    #[error("invalid coefficients: {0}")]
    BadCoefficients(String),
    #[error("F quantile undefined: {0}")]
    FQuantile(String),
    #[error("operation does not map the candidate set onto itself")]
    NotCandidatePreserving,
    #[error("candidate index {0} out of range")]
    BadIndex(usize),
    #[error("degenerate point set: {0}")]
    Degenerate(String),
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
