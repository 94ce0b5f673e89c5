use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::GraphError;

/// A stable graph in compact form.
///
/// Half-edges are identified by position: the leg with marking `i` is
/// half-edge `i - 1`, and edge `e` owns half-edges `n + 2e` (at
/// `edges[e].0`) and `n + 2e + 1` (at `edges[e].1`). Loops are edges with equal
/// endpoints.
///
/// Values of this type are not necessarily stable; [`StableGraph::validate`]
/// checks the defining conditions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StableGraph {
    genera: Vec<u32>,
    legs: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

/// Graph data in the general half-edge form `(V, H, g, p, iota, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphParts {
    pub vertex_genera: Vec<u32>,
    /// `p`: vertex of each half-edge.
    pub half_edge_vertex: Vec<usize>,
    /// `iota`: fixed points are legs, two-cycles are edges.
    pub involution: Vec<usize>,
    /// `m`: half-edge carrying marking `i + 1`.
    pub markings: Vec<usize>,
    /// Declared total genus, checked against `h1 + sum g(v)` if present.
    pub genus: Option<u32>,
}

impl StableGraph {
    /// Builds a graph, checking only that vertex indices are in range.
    pub fn new(genera: Vec<u32>, legs: Vec<usize>, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let nv = genera.len();
        if nv == 0 {
            return Err(GraphError::NoVertices);
        }
        if legs.iter().chain(edges.iter().flat_map(|(a, b)| [a, b])).any(|&v| v >= nv) {
            return Err(GraphError::VertexOutOfRange);
        }
        Ok(StableGraph { genera, legs, edges })
    }

    /// The one-vertex graph of genus `g` with `n` legs.
    pub fn trivial(g: u32, n: usize) -> Self {
        StableGraph { genera: vec![g], legs: vec![0; n], edges: Vec::new() }
    }

    /// Builds from general half-edge data, validating the involution and the
    /// marking, then the stable graph conditions.
    pub fn from_parts(parts: &GraphParts) -> Result<Self, GraphError> {
        let h = parts.half_edge_vertex.len();
        if parts.involution.len() != h {
            return Err(GraphError::MalformedInvolution { half_edge: parts.involution.len().min(h) });
        }
        for (i, &j) in parts.involution.iter().enumerate() {
            if j >= h || parts.involution[j] != i {
                return Err(GraphError::MalformedInvolution { half_edge: i });
            }
        }
        let fixed: Vec<usize> = (0..h).filter(|&i| parts.involution[i] == i).collect();
        let mut marked = vec![false; h];
        for &m in &parts.markings {
            if m >= h || parts.involution[m] != m || marked[m] {
                return Err(GraphError::MarkingNotBijective);
            }
            marked[m] = true;
        }
        if parts.markings.len() != fixed.len() {
            return Err(GraphError::MarkingNotBijective);
        }
        let legs = parts.markings.iter().map(|&m| parts.half_edge_vertex[m]).collect();
        let edges = (0..h)
            .filter(|&i| parts.involution[i] > i)
            .map(|i| (parts.half_edge_vertex[i], parts.half_edge_vertex[parts.involution[i]]))
            .collect();
        let graph = StableGraph::new(parts.vertex_genera.clone(), legs, edges)?;
        graph.validate()?;
        if let Some(declared) = parts.genus {
            let computed = graph.genus();
            if declared != computed {
                return Err(GraphError::GenusMismatch { declared, computed });
            }
        }
        Ok(graph)
    }

    pub fn genera(&self) -> &[u32] {
        &self.genera
    }

    pub fn vertex_genus(&self, v: usize) -> u32 {
        self.genera[v]
    }

    /// Vertex of each marking, indexed by `marking - 1`.
    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.genera.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_legs(&self) -> usize {
        self.legs.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.legs.len() + 2 * self.edges.len()
    }

    /// First Betti number `#E - #V + 1` (assumes connectivity).
    pub fn h1(&self) -> u32 {
        (self.edges.len() + 1 - self.genera.len()) as u32
    }

    /// `h1 + sum of vertex genera`.
    pub fn genus(&self) -> u32 {
        self.h1() + self.genera.iter().sum::<u32>()
    }

    pub fn is_trivial(&self) -> bool {
        self.genera.len() == 1 && self.edges.is_empty()
    }

    pub fn half_edge_vertex(&self, h: usize) -> usize {
        let n = self.legs.len();
        if h < n {
            self.legs[h]
        } else {
            let (a, b) = self.edges[(h - n) / 2];
            if (h - n) % 2 == 0 {
                a
            } else {
                b
            }
        }
    }

    /// The other half-edge of the same edge, or `None` for a leg.
    pub fn partner(&self, h: usize) -> Option<usize> {
        let n = self.legs.len();
        if h < n {
            None
        } else {
            Some(if (h - n) % 2 == 0 { h + 1 } else { h - 1 })
        }
    }

    /// Half-edges (legs included) attached to `v`, in increasing id order.
    pub fn half_edges_at(&self, v: usize) -> Vec<usize> {
        (0..self.num_half_edges()).filter(|&h| self.half_edge_vertex(h) == v).collect()
    }

    /// `n(v) = #p^{-1}(v)`.
    pub fn valence(&self, v: usize) -> usize {
        self.legs.iter().filter(|&&x| x == v).count()
            + self.edges.iter().map(|&(a, b)| (a == v) as usize + (b == v) as usize).sum::<usize>()
    }

    /// `2g(v) - 2 + n(v)`.
    pub fn euler_char(&self, v: usize) -> i64 {
        2 * self.genera[v] as i64 - 2 + self.valence(v) as i64
    }

    /// Dimension `3g(v) - 3 + n(v)` of the vertex moduli space.
    pub fn vertex_dim(&self, v: usize) -> i64 {
        3 * self.genera[v] as i64 - 3 + self.valence(v) as i64
    }

    pub fn is_connected(&self) -> bool {
        let nv = self.genera.len();
        let mut parent: Vec<usize> = (0..nv).collect();
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
        let root = find(&mut parent, 0);
        (0..nv).all(|v| find(&mut parent, v) == root)
    }

    /// Checks connectivity and stability. The genus condition holds by
    /// construction for this representation.
    pub fn validate(&self) -> Result<(), GraphError> {
        if !self.is_connected() {
            return Err(GraphError::Disconnected);
        }
        let unstable: Vec<(usize, i64)> = (0..self.num_vertices())
            .map(|v| (v, self.euler_char(v)))
            .filter(|&(_, x)| x <= 0)
            .collect();
        if !unstable.is_empty() {
            return Err(GraphError::Unstable { vertices: unstable });
        }
        Ok(())
    }

    pub fn is_stable(&self) -> bool {
        self.validate().is_ok()
    }

    /// Contracts one edge. A loop raises its vertex genus by one; a non-loop
    /// merges its endpoints. The result is not re-validated.
    pub fn contract_edge(&self, edge: usize) -> Result<StableGraph, GraphError> {
        if edge >= self.edges.len() {
            return Err(GraphError::EdgeOutOfRange(edge));
        }
        let mut mask = vec![false; self.edges.len()];
        mask[edge] = true;
        Ok(self.contract(&mask).graph)
    }

    /// Contracts every edge flagged in `mask`.
    pub fn contract(&self, mask: &[bool]) -> Contraction {
        assert_eq!(mask.len(), self.edges.len());
        let nv = self.genera.len();
        let mut parent: Vec<usize> = (0..nv).collect();
        let mut contracted_edges_at_root = vec![0u32; nv];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if mask[e] {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
        let mut new_index = vec![usize::MAX; nv];
        let mut count = 0;
        let vertex_map: Vec<usize> = (0..nv)
            .map(|v| {
                let r = find(&mut parent, v);
                if new_index[r] == usize::MAX {
                    new_index[r] = count;
                    count += 1;
                }
                new_index[r]
            })
            .collect();
        let mut members = vec![0u32; count];
        let mut genera = vec![0u32; count];
        for v in 0..nv {
            members[vertex_map[v]] += 1;
            genera[vertex_map[v]] += self.genera[v];
        }
        for (e, &(a, _)) in self.edges.iter().enumerate() {
            if mask[e] {
                contracted_edges_at_root[vertex_map[a]] += 1;
            }
        }
        for w in 0..count {
            // h1 of the contracted connected subgraph
            genera[w] += contracted_edges_at_root[w] + 1 - members[w];
        }
        let legs = self.legs.iter().map(|&v| vertex_map[v]).collect();
        let mut edges = Vec::new();
        let mut edge_map = vec![None; self.edges.len()];
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if !mask[e] {
                edge_map[e] = Some(edges.len());
                edges.push((vertex_map[a], vertex_map[b]));
            }
        }
        Contraction { graph: StableGraph { genera, legs, edges }, vertex_map, edge_map }
    }

    /// Applies a vertex relabeling and edge reordering. `vertex_map[old] =
    /// new`; `edge_order` lists old edges in their new order with a flag to
    /// swap the two half-edges.
    pub(crate) fn relabeled(&self, vertex_map: &[usize], edge_order: &[(usize, bool)]) -> StableGraph {
        let mut genera = vec![0; self.genera.len()];
        for (old, &new) in vertex_map.iter().enumerate() {
            genera[new] = self.genera[old];
        }
        let legs = self.legs.iter().map(|&v| vertex_map[v]).collect();
        let edges = edge_order
            .iter()
            .map(|&(e, swap)| {
                let (a, b) = self.edges[e];
                let (a, b) = (vertex_map[a], vertex_map[b]);
                if swap {
                    (b, a)
                } else {
                    (a, b)
                }
            })
            .collect();
        StableGraph { genera, legs, edges }
    }
}

/// Result of contracting a set of edges, with the induced maps.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: StableGraph,
    /// old vertex -> new vertex
    pub vertex_map: Vec<usize>,
    /// old edge -> new edge, `None` if contracted
    pub edge_map: Vec<Option<usize>>,
}

impl Contraction {
    /// Image of an old half-edge, `None` if it belonged to a contracted edge.
    pub fn half_edge_map(&self, n: usize, h: usize) -> Option<usize> {
        if h < n {
            return Some(h);
        }
        let e = (h - n) / 2;
        self.edge_map[e].map(|ne| n + 2 * ne + (h - n) % 2)
    }
}

pub(crate) fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

#[derive(Serialize, Deserialize)]
struct VertexJson {
    genus: u32,
}

#[derive(Serialize, Deserialize)]
struct LegJson {
    marking: usize,
    vertex: usize,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    genus: u32,
    n: usize,
    vertices: Vec<VertexJson>,
    edges: Vec<[usize; 2]>,
    legs: Vec<LegJson>,
}

impl Serialize for StableGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GraphJson {
            genus: self.genus(),
            n: self.legs.len(),
            vertices: self.genera.iter().map(|&genus| VertexJson { genus }).collect(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            legs: self
                .legs
                .iter()
                .enumerate()
                .map(|(i, &vertex)| LegJson { marking: i + 1, vertex })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StableGraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let json = GraphJson::deserialize(deserializer)?;
        if json.legs.len() != json.n {
            return Err(D::Error::custom(GraphError::MarkingNotBijective));
        }
        let mut legs = vec![usize::MAX; json.n];
        for leg in &json.legs {
            if leg.marking == 0 || leg.marking > json.n || legs[leg.marking - 1] != usize::MAX {
                return Err(D::Error::custom(GraphError::MarkingNotBijective));
            }
            legs[leg.marking - 1] = leg.vertex;
        }
        let genera = json.vertices.iter().map(|v| v.genus).collect();
        let edges = json.edges.iter().map(|e| (e[0], e[1])).collect();
        let graph = StableGraph::new(genera, legs, edges).map_err(D::Error::custom)?;
        graph.validate().map_err(D::Error::custom)?;
        if graph.genus() != json.genus {
            return Err(D::Error::custom(GraphError::GenusMismatch {
                declared: json.genus,
                computed: graph.genus(),
            }));
        }
        Ok(graph)
    }
}
