//! Three-dimensional Minkowski-Voronoi continued fractions.
//!
//! The crate computes Voronoi relative minima of finite axial sets and of
//! rank-1 lattices `Γ(a,b,N)`, assembles the Minkowski-Voronoi complex
//! (faces = minima, edges = minimal pairs, vertices = minimal triples),
//! draws canonical planar diagrams with all edges in the six hexagonal
//! directions, and studies two-parametric lattice families through their
//! geometric codes: structural candidate lists, stabilization sweeps and
//! alphabetic diagram words.
//!
//! All arithmetic is exact: lattice coordinates are `u64`, diagram
//! coordinates are big rationals. Nothing in the pipeline depends on
//! floating point until SVG emission.

pub mod cli;
pub mod complex;
pub mod diagram;
pub mod geocode;
pub mod minima;
pub mod numth;
pub mod stabilize;
pub mod words;
pub mod xilist;

/// Errors surfaced by the library.
///
/// `Domain` covers violated preconditions on user input, `Degenerate`
/// covers inputs that fail general position, and `Internal` flags a broken
/// invariant of the construction itself (never silently ignored).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("internal invariant failure: {0}")]
    Internal(String),

    #[error("unknown format: {0}")]
    UnknownFormat(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Degenerate(_) | Error::UnknownFormat(_) => 2,
            _ => 1,
        }
    }
}
