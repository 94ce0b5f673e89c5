//! The strata algebra: formal combinations of decorated stable graphs with
//! the excess-intersection product, grading and forgetful pushforward.

mod decorated;
mod element;
mod product;
mod pushforward;

pub use decorated::{kappa_mul, DecoratedGraph, Decoration, KappaMonomial};
pub use element::StrataElement;
pub use pushforward::Pushforward;

use crate::stablegraphs::GraphError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrataError {
    #[error("ambient mismatch: S_{{{0},{1}}} vs S_{{{2},{3}}}")]
    AmbientMismatch(u32, usize, u32, usize),
    #[error("forgetting a leg of S_{{{g},{n}}} leaves an unstable space")]
    UnstableTarget { g: u32, n: usize },
    #[error("marking {marking} out of range 1..={n}")]
    LegOutOfRange { marking: usize, n: usize },
    #[error("contracted vertex carries a nonzero decoration")]
    DecoratedContraction,
    #[error("principal part requested but a trivial-graph term carries kappa")]
    KappaInPrincipalPart,
    #[error("malformed strata element JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
