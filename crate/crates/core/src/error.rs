use thiserror::Error;

use crate::graph::GraphViolation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantityError {
    #[error("quantization bits {0} exceed the supported maximum")]
    TooManyBits(u32),
    #[error("value {0} is not finite")]
    NotFinite(f64),
    #[error("value {0} does not fit the fixed-point range")]
    OutOfRange(f64),
    #[error("cannot parse {0:?} as a rational number")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DataError {
    #[error("no points")]
    NoPoints,
    #[error("points must have at least one coordinate")]
    ZeroDimension,
    #[error("point {row} has {found} coordinates, expected {expected}")]
    DimensionMismatch { row: usize, expected: usize, found: usize },
    #[error("coordinate {col} of point {row} is not finite")]
    NotFinite { row: usize, col: usize },
    #[error("{labels} labels given for {points} points")]
    LabelCount { labels: usize, points: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TreeError {
    #[error("root {root} is not a vertex of a tree on {n} vertices")]
    RootOutOfRange { root: usize, n: usize },
    #[error("tree needs at least one vertex")]
    Empty,
    #[error("expected {expected} edges for a spanning tree, got {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("edge ({0}, {1}) references a missing vertex")]
    EdgeOutOfRange(usize, usize),
    #[error("edges do not form a spanning tree (vertex {0} unreachable)")]
    NotSpanning(usize),
    #[error("vertex arrays have inconsistent lengths")]
    LengthMismatch,
    #[error("invalid weights: {0}")]
    Invalid(GraphViolation),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubpartitionError {
    #[error("part {0} is empty")]
    EmptyPart(usize),
    #[error("vertex {0} appears in more than one part")]
    Overlap(usize),
    #[error("vertex {vertex} is out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("subpartition has {found} vertices but the tree has {expected}")]
    SizeMismatch { expected: usize, found: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AffinityError {
    #[error("need at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("sigma must be positive and finite, got {0}")]
    BadSigma(f64),
    #[error("neighbour count {nu} out of range 1..{n}")]
    BadNu { nu: usize, n: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("{0} potentials given for {1} vertices")]
    PotentialCount(usize, usize),
    #[error(transparent)]
    Quantity(#[from] QuantityError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpanningError {
    #[error("graph is disconnected: {} components (smallest vertices {:?})", .0.len(), .0.iter().map(|c| c[0]).collect::<Vec<_>>())]
    Disconnected(Vec<Vec<usize>>),
    #[error("invalid affinity graph: {0}")]
    Invalid(GraphViolation),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("k = {k} out of range 2..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("alpha must be nonnegative")]
    NegativeAlpha,
    #[error("threshold must be nonnegative")]
    NegativeThreshold,
    #[error("scaled weights overflow 128-bit accumulators")]
    Overflow,
    #[error(transparent)]
    Subpartition(#[from] SubpartitionError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FunctionalError {
    #[error("expected {expected} values per function, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("function {0} takes a negative value")]
    Negative(usize),
    #[error("function {0} is identically zero")]
    Zero(usize),
    #[error("functions {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("alpha must be nonnegative")]
    NegativeAlpha,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PostprocessError {
    #[error("input subpartition cost {cost} exceeds threshold {threshold}")]
    CostAboveThreshold { cost: String, threshold: String },
    #[error("edge ({0}, {1}) is not a break edge of the part")]
    NotBreakEdge(usize, usize),
    #[error("part index {0} out of range")]
    PartOutOfRange(usize),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("brute force is limited to {max} vertices, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error(transparent)]
    Solver(#[from] SolverError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("predicted has {predicted} labels, truth has {truth}")]
    LengthMismatch { predicted: usize, truth: usize },
    #[error("no labels to compare")]
    Empty,
}

/// Umbrella error for the end-to-end pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Affinity(#[from] AffinityError),
    #[error(transparent)]
    Spanning(#[from] SpanningError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Postprocess(#[from] PostprocessError),
    #[error(transparent)]
    Quantity(#[from] QuantityError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
