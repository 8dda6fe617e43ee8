use thiserror::Error;

/// Errors produced by the library.
///
/// Candidate labels carried in error payloads are 1-based, matching the
/// external file formats.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid preference matrix: {0}")]
    Invariant(String),

    #[error("relation is not a strict partial order: {0}")]
    Cycle(String),

    #[error("chains do not partition the candidates: {0}")]
    Partition(String),

    #[error("candidate {x} is not strictly preferred to candidate {y}")]
    NotComparable { x: usize, y: usize },

    #[error("pair ({x}, {y}) cannot be removed: candidate {via} lies between them")]
    NotRemovable { x: usize, y: usize, via: usize },

    #[error("dimension mismatch: expected {expected} candidates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix class {found} not accepted here (need {needed})")]
    Class { found: String, needed: &'static str },

    #[error("component profile {component} is inconsistent with its submatrix")]
    InconsistentInput { component: usize },

    #[error("coloring is not proper: {0}")]
    ImproperColoring(String),

    #[error("{n} candidates cannot be split into {k} equal parts")]
    Divisibility { n: usize, k: usize },

    #[error("instance of size {n} exceeds the limit of {limit}")]
    SizeLimit { n: usize, limit: usize },

    #[error("invalid dicoloring: {0}")]
    InvalidDicoloring(String),

    #[error("not a tournament: {0}")]
    NotTournament(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
