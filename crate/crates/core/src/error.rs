use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("radius must be non-negative, got {0}")]
    NegativeRadius(f64),
    #[error("point ({x}, {y}, {z}) does not lie on the hyperboloid")]
    OffHyperboloid { x: f64, y: f64, z: f64 },
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("{{{p},{q}}} does not tile the hyperbolic plane")]
    NotHyperbolic { p: usize, q: usize },
    #[error("{rings} rings exceeds the cap of {cap}")]
    TooManyRings { rings: usize, cap: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("decomposition does not match the instance: {0}")]
    Mismatch(String),
    #[error("instance has no solution")]
    Unsatisfiable,
    #[error("brute force refused: {n} vertices exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("bag colorings of this decomposition do not fit a 128-bit key")]
    KeyOverflow,
    #[error("invalid board: {0}")]
    InvalidBoard(String),
    #[error("coloring violates the instance constraints")]
    InvalidColoring,
    #[error("malformed instance file: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
