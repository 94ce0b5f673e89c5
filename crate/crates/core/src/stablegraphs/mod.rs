//! Stable graphs: validity, enumeration up to isomorphism, canonical labeling
//! and automorphism counting.

mod canon;
mod enumerate;
mod graph;

pub use canon::{automorphism_count, canonical_form, canonical_graph, isomorphisms, CanonicalForm, Isomorphism};
pub(crate) use canon::{canonicalize, Labels};
pub use enumerate::{enumerate, enumerate_cached};
pub use graph::{Contraction, GraphParts, StableGraph};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    NoVertices,
    #[error("vertex index out of range")]
    VertexOutOfRange,
    #[error("involution is not an involution at half-edge {half_edge}")]
    MalformedInvolution { half_edge: usize },
    #[error("marking is not a bijection onto the legs")]
    MarkingNotBijective,
    #[error("graph is not connected")]
    Disconnected,
    #[error("unstable vertices (vertex, 2g-2+n): {vertices:?}")]
    Unstable { vertices: Vec<(usize, i64)> },
    #[error("declared genus {declared} but h1 + sum g(v) = {computed}")]
    GenusMismatch { declared: u32, computed: u32 },
    #[error("edge index {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("(g, n) = ({g}, {n}) is not stable: 2g - 2 + n must be positive")]
    UnstableType { g: u32, n: usize },
}
