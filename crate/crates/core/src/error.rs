use thiserror::Error;

use crate::lie::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("index {index} out of range for dimension {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("ambient dimension must be positive")]
    ZeroDimension,

    #[error("multi-index has length {got}, expected {expected}")]
    BadMultiIndex { expected: usize, got: usize },

    #[error("element is not a polynomial: term {0} carries a derivative")]
    NotAPolynomial(String),

    #[error("word must have at least one letter")]
    EmptyWord,

    #[error("invalid coefficient family: {0}")]
    InvalidFamily(String),

    #[error("invalid structure constants: {}", format_violations(.0))]
    InvalidStructureConstants(Vec<Violation>),

    #[error("truncation order {order} too small: need at least {required}")]
    OrderTooSmall { order: u32, required: u32 },

    #[error("density must lie in [0, 1], got {0}")]
    BadDensity(String),
}

fn format_violations(v: &[Violation]) -> String {
    let shown: Vec<String> = v.iter().take(8).map(|x| x.to_string()).collect();
    if v.len() > shown.len() {
        format!("{} (and {} more)", shown.join("; "), v.len() - shown.len())
    } else {
        shown.join("; ")
    }
}
