use thiserror::Error;

/// Error type shared across the library.
///
/// The four validation variants mirror the input assumptions on the polytope
/// so a caller can report exactly which one failed. `Internal` signals a
/// broken invariant inside the library itself (a bug, never bad input) and
/// callers are expected to abort on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    BadInput(String),
    #[error("not full-dimensional: vertices span a proper subspace (rank {found} < {expected})")]
    NotFullDimensional { found: usize, expected: usize },
    #[error("origin not interior: supporting hyperplane {hyperplane} does not have 0 strictly inside")]
    OriginNotInterior { hyperplane: String },
    #[error("not simplicial: {on_hyperplane} vertices lie on a common facet hyperplane (expected {rank})")]
    NotSimplicial { on_hyperplane: usize, rank: usize },
    #[error("redundant point: vertex #{index} {point} is not a vertex of the hull")]
    RedundantPoint { index: usize, point: String },
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("cone {0:?} is not in the fan")]
    ConeNotInFan(Vec<usize>),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// True for the validation variants that describe bad user input.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::BadInput(_)
                | Error::NotFullDimensional { .. }
                | Error::OriginNotInterior { .. }
                | Error::NotSimplicial { .. }
                | Error::RedundantPoint { .. }
        )
    }

    /// Stable machine-readable tag for reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::BadInput(_) => "bad-input",
            Error::NotFullDimensional { .. } => "not-full-dimensional",
            Error::OriginNotInterior { .. } => "origin-not-interior",
            Error::NotSimplicial { .. } => "not-simplicial",
            Error::RedundantPoint { .. } => "redundant-point",
            Error::NonSquare { .. } => "non-square",
            Error::ConeNotInFan(_) => "cone-not-in-fan",
            Error::Internal(_) => "internal",
        }
    }
}
