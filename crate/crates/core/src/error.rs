use thiserror::Error;

use crate::poly::ParseError;
use crate::Rational;

fn show(point: &[Rational]) -> String {
    let parts: Vec<String> = point.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("expected a form of degree {expected}, found degree {found}")]
    WrongDegree { expected: usize, found: usize },

    #[error("operation requires a form of positive degree")]
    ZeroDegree,

    #[error("sample domain is empty")]
    EmptyDomain,

    #[error("sample point has {found} coordinates, expected {expected}")]
    PointDimension { expected: usize, found: usize },

    #[error("vector fields span a {found}-dimensional space at {}, but {expected} elsewhere", show(point))]
    NonConstantSpan {
        point: Vec<Rational>,
        expected: usize,
        found: usize,
    },

    #[error("base pair has class {class} at {}, expected {expected} parity", show(point))]
    BaseParity {
        point: Vec<Rational>,
        class: usize,
        expected: &'static str,
    },

    #[error("no polynomial spanning fields for Ker ω are available: {0}")]
    SpanningFieldsUnavailable(String),

    #[error("scaling function vanishes at {}", show(point))]
    ScaleVanishes { point: Vec<Rational> },

    #[error("dimension {dim} is too small for a model of class {class}")]
    DimensionTooSmall { dim: usize, class: usize },

    #[error("linear system B̂(X) = τ has no solution")]
    Inconsistent,

    #[error(transparent)]
    Parse(#[from] ParseError),
}
