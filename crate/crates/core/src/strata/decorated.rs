use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use crate::stablegraphs::{canonicalize, Labels, StableGraph};

/// Sorted `(index, exponent)` pairs with `index >= 1` and `exponent > 0`:
/// the monomial `prod kappa_index^exponent` at one vertex.
pub type KappaMonomial = Vec<(u32, u32)>;

/// A basic class `gamma = (x_i, y)`: kappa monomials per vertex and psi
/// exponents per half-edge (legs included, indexed by half-edge id).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Decoration {
    pub kappa: Vec<KappaMonomial>,
    pub psi: Vec<u32>,
}

impl Decoration {
    pub fn trivial(graph: &StableGraph) -> Self {
        Decoration { kappa: vec![Vec::new(); graph.num_vertices()], psi: vec![0; graph.num_half_edges()] }
    }

    /// `d(gamma_v)`.
    pub fn vertex_degree(&self, graph: &StableGraph, v: usize) -> u32 {
        let k: u32 = self.kappa[v].iter().map(|&(i, x)| i * x).sum();
        let p: u32 = (0..graph.num_half_edges())
            .filter(|&h| graph.half_edge_vertex(h) == v)
            .map(|h| self.psi[h])
            .sum();
        k + p
    }

    pub fn degree(&self) -> u32 {
        let k: u32 = self.kappa.iter().flatten().map(|&(i, x)| i * x).sum();
        k + self.psi.iter().sum::<u32>()
    }

    pub fn has_kappa(&self) -> bool {
        self.kappa.iter().any(|m| !m.is_empty())
    }

    /// Degree condition `d(gamma_v) <= 3g(v) - 3 + n(v)` at every vertex.
    pub fn satisfies_degree_condition(&self, graph: &StableGraph) -> bool {
        (0..graph.num_vertices()).all(|v| self.vertex_degree(graph, v) as i64 <= graph.vertex_dim(v))
    }
}

/// Multiplies `kappa_index^exp` into a kappa monomial.
pub fn kappa_mul(m: &mut KappaMonomial, index: u32, exp: u32) {
    if exp == 0 {
        return;
    }
    match m.binary_search_by_key(&index, |&(i, _)| i) {
        Ok(pos) => m[pos].1 += exp,
        Err(pos) => m.insert(pos, (index, exp)),
    }
}

/// A decorated stable graph `[Gamma, gamma]` in canonical labeling.
#[derive(Clone, Debug)]
pub struct DecoratedGraph {
    graph: StableGraph,
    decoration: Decoration,
    key: Vec<u32>,
}

impl DecoratedGraph {
    /// Canonicalizes `(graph, decoration)`. Returns `None` when the degree
    /// condition fails, i.e. the class is zero by truncation.
    pub fn new(graph: &StableGraph, decoration: &Decoration) -> Option<Self> {
        assert_eq!(decoration.kappa.len(), graph.num_vertices(), "kappa length");
        assert_eq!(decoration.psi.len(), graph.num_half_edges(), "psi length");
        if !decoration.satisfies_degree_condition(graph) {
            return None;
        }
        let vertex_labels: Vec<Vec<u32>> = decoration
            .kappa
            .iter()
            .map(|m| m.iter().flat_map(|&(i, x)| [i, x]).collect())
            .collect();
        let canon = canonicalize(graph, &Labels { vertex: &vertex_labels, half_edge: &decoration.psi });
        let n = graph.num_legs();
        let relabeled = graph.relabeled(&canon.vertex_map, &canon.edge_order);
        let mut kappa = vec![Vec::new(); graph.num_vertices()];
        for (old, &new) in canon.vertex_map.iter().enumerate() {
            kappa[new] = decoration.kappa[old].clone();
        }
        let hmap = canon.half_edge_map(n);
        let mut psi = vec![0; decoration.psi.len()];
        for (old, &new) in hmap.iter().enumerate() {
            psi[new] = decoration.psi[old];
        }
        Some(DecoratedGraph { graph: relabeled, decoration: Decoration { kappa, psi }, key: canon.key })
    }

    /// Builds from explicit pieces: vertex genera and kappa monomials, legs as
    /// `(vertex, psi)` in marking order, edges as `(a, b, psi_a, psi_b)`.
    pub fn from_pieces(
        genera: Vec<u32>,
        kappa: Vec<KappaMonomial>,
        legs: &[(usize, u32)],
        edges: &[(usize, usize, u32, u32)],
    ) -> Option<Self> {
        let graph = StableGraph::new(
            genera,
            legs.iter().map(|&(v, _)| v).collect(),
            edges.iter().map(|&(a, b, _, _)| (a, b)).collect(),
        )
        .expect("vertex indices in range");
        let mut psi: Vec<u32> = legs.iter().map(|&(_, p)| p).collect();
        for &(_, _, pa, pb) in edges {
            psi.push(pa);
            psi.push(pb);
        }
        DecoratedGraph::new(&graph, &Decoration { kappa, psi })
    }

    /// The undecorated class `[Gamma, 1]`.
    pub fn plain(graph: &StableGraph) -> Self {
        DecoratedGraph::new(graph, &Decoration::trivial(graph)).expect("trivial decoration has degree 0")
    }

    pub fn graph(&self) -> &StableGraph {
        &self.graph
    }

    pub fn decoration(&self) -> &Decoration {
        &self.decoration
    }

    pub fn key(&self) -> &[u32] {
        &self.key
    }

    /// `deg[Gamma, gamma] = |E| + d(gamma)`.
    pub fn degree(&self) -> u32 {
        self.graph.num_edges() as u32 + self.decoration.degree()
    }

    /// Psi exponent on the leg with the given marking.
    pub fn leg_psi(&self, marking: usize) -> u32 {
        self.decoration.psi[marking - 1]
    }
}

impl PartialEq for DecoratedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for DecoratedGraph {}

impl Hash for DecoratedGraph {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl PartialOrd for DecoratedGraph {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DecoratedGraph {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}
