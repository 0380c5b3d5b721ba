//! Flexible octahedra: combinatorial bond calculus, Bricard-type classification,
//! reduction to spherical linkages, and numerical motion tracing.
//!
//! The octahedral graph has vertices `1..=6` and all edges except the three
//! diagonals `{1,2}`, `{3,4}`, `{5,6}`. An edge labeling assigns a positive
//! length to each of the 12 edges; a realization places the six vertices in
//! 3-space. The crate answers, constructively, the questions that matter for
//! such linkages: which length conditions the known flexible families satisfy
//! ([`classify`]), which combinatorial bonds and μ-number profiles a motion can
//! carry ([`bonds`]), how spatial realizations reduce to the unit sphere
//! ([`sphere`]), and whether a given labeling actually moves ([`motion`]).

pub mod bonds;
pub mod classify;
pub mod motion;
pub mod nap;
pub mod oct;
pub mod sphere;

pub use oct::{Edge, OctLabeling, OrientedEdge, Pyramid, Quadrilateral, Realization, VertexId};

/// Default numeric tolerance used whenever an operation does not take one.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Errors produced by the domain operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("vertex id {0} out of range 1..=6")]
    BadVertex(u8),
    #[error("{0}-{1} is not an edge of the octahedral graph")]
    NonEdge(u8, u8),
    #[error("labeling invalid: {0}")]
    BadLabeling(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("point at infinity: left and right lift coincide")]
    AtInfinity,
    #[error("graph too large for exhaustive search: {0} edges (limit {1})")]
    Capacity(usize, usize),
    #[error("no seed realization found: {0}")]
    NoSeed(String),
    #[error("seed realization is rigid (rank {rank}, flex dimension 0)")]
    RigidSeed { rank: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
