use thiserror::Error;

use crate::complex::{Simplex, Vertex};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed simplex {0:?}: repeated or missing vertices")]
    MalformedSimplex(Vec<Vertex>),

    #[error("simplex {0} is not in the complex")]
    MissingSimplex(Simplex),

    #[error("vertex {0} is not in the complex")]
    MissingVertex(Vertex),

    #[error("no value for vertex {0}")]
    MissingValue(Vertex),

    #[error("value for vertex {vertex} is not a finite number: {value}")]
    NonFiniteValue { vertex: Vertex, value: f64 },

    #[error("level {0} is not a value taken by the function")]
    InvalidLevel(f64),

    #[error("cannot cone vertex {vertex} over {simplex}: the vertex already belongs to it")]
    DegenerateCone { vertex: Vertex, simplex: Simplex },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("unsupported dimension {0} (supported: 1 to 3)")]
    UnsupportedDimension(isize),

    #[error("not a subcomplex: {0} is missing from the ambient complex")]
    NotSubcomplex(Simplex),

    #[error("not a combinatorial manifold at vertex {vertex}: {reason}")]
    NotManifold { vertex: Vertex, reason: String },

    #[error("not a subcomplex of the 2-sphere: {0}")]
    NotSphereSubcomplex(String),

    #[error("lower link of vertex {0} is empty; the vertex is a critical minimum on its own")]
    EmptyLowerLink(Vertex),

    #[error("invalid gradient field: {0}")]
    InvalidField(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
