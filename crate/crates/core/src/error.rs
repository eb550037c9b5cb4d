use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read or write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("non-triangular face {face} with {corners} corners")]
    NonTriangularFace { face: usize, corners: usize },

    #[error("face {face} references vertex {index}, but the mesh has {vertex_count} vertices")]
    DanglingVertex {
        face: usize,
        index: usize,
        vertex_count: usize,
    },

    #[error("face {face} repeats a vertex")]
    RepeatedVertex { face: usize },

    #[error("non-manifold edge ({a}, {b}) has {faces} incident faces")]
    NonManifoldEdge { a: usize, b: usize, faces: usize },

    #[error("mesh has no faces")]
    EmptyMesh,

    #[error("double cover requires boundary")]
    ClosedMesh,

    #[error("mesh is disconnected ({components} components)")]
    DisconnectedMesh { components: usize },

    #[error("vertex positions missing")]
    MissingPositions,

    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("edge {edge} has zero length")]
    ZeroLengthEdge { edge: usize },

    #[error("component {index} is not positive ({value})")]
    NonPositive { index: usize, value: f64 },

    #[error("face {face} violates the triangle inequality or is degenerate")]
    InadmissibleFace { face: usize },

    #[error("degenerate triangle with lengths {lengths:?}")]
    DegenerateTriangle { lengths: [f64; 3] },

    #[error("inconsistent cotangent triple: angles sum to {angle_sum}")]
    InconsistentCotangents { angle_sum: f64 },

    #[error("heat kernel time must be nonnegative, got {0}")]
    NegativeTime(f64),

    #[error("finite-difference step must be positive, got {0}")]
    NonPositiveStep(f64),

    #[error("segment between metrics leaves the admissible region at face {face}")]
    SegmentLeavesDomain { face: usize },

    #[error("symmetric eigendecomposition did not converge")]
    EigenDecomposition,

    #[error("linear solve failed: {0}")]
    LinearSolve(String),

    #[error("covering copies of edge {edge} disagree (relative deviation {deviation:e})")]
    CoverMismatch { edge: usize, deviation: f64 },

    #[error("invalid solver option: {0}")]
    InvalidOption(String),

    #[error("edge {edge} of the input is ({a}, {b}), expected ({expected_a}, {expected_b})")]
    EdgeOrderMismatch {
        edge: usize,
        a: usize,
        b: usize,
        expected_a: usize,
        expected_b: usize,
    },
}
