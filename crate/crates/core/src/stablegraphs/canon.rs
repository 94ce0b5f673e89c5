//! Canonical labeling, automorphism counting and isomorphism enumeration.
//!
//! Graphs in this crate are small, so canonical forms are found by trying every
//! vertex ordering that respects a cheap vertex invariant and keeping the
//! lexicographically smallest encoding.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use super::StableGraph;

/// Identifies the isomorphism class of a (possibly decorated) graph together
/// with the relabeling that produces the canonical representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    /// Total-order key; equal iff isomorphic.
    pub key: Vec<u32>,
    /// old vertex -> canonical vertex
    pub vertex_map: Vec<usize>,
    /// canonical edge position -> (old edge, half-edges swapped)
    pub edge_order: Vec<(usize, bool)>,
}

impl CanonicalForm {
    pub fn key_bytes(&self) -> Vec<u8> {
        self.key.iter().flat_map(|x| x.to_be_bytes()).collect()
    }

    /// old half-edge id -> canonical half-edge id
    pub fn half_edge_map(&self, n: usize) -> Vec<usize> {
        let mut map: Vec<usize> = (0..n + 2 * self.edge_order.len()).collect();
        for (pos, &(e, swap)) in self.edge_order.iter().enumerate() {
            let (first, second) = (n + 2 * e, n + 2 * e + 1);
            let (first, second) = if swap { (second, first) } else { (first, second) };
            map[first] = n + 2 * pos;
            map[second] = n + 2 * pos + 1;
        }
        map
    }
}

/// Per-vertex decoration labels and per-half-edge labels attached to a graph
/// for canonicalization. Empty labels give the undecorated form.
pub(crate) struct Labels<'a> {
    pub vertex: &'a [Vec<u32>],
    pub half_edge: &'a [u32],
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct VertexInvariant {
    genus: u32,
    label: Vec<u32>,
    valence: usize,
    legs: Vec<(usize, u32)>,
    loops: Vec<(u32, u32)>,
    ends: Vec<u32>,
}

fn invariants(graph: &StableGraph, labels: &Labels<'_>) -> Vec<VertexInvariant> {
    let n = graph.num_legs();
    let mut inv: Vec<VertexInvariant> = (0..graph.num_vertices())
        .map(|v| VertexInvariant {
            genus: graph.vertex_genus(v),
            label: labels.vertex.get(v).cloned().unwrap_or_default(),
            valence: graph.valence(v),
            legs: Vec::new(),
            loops: Vec::new(),
            ends: Vec::new(),
        })
        .collect();
    for (i, &v) in graph.legs().iter().enumerate() {
        inv[v].legs.push((i, label_of(labels, i)));
    }
    for (e, &(a, b)) in graph.edges().iter().enumerate() {
        let (la, lb) = (label_of(labels, n + 2 * e), label_of(labels, n + 2 * e + 1));
        if a == b {
            inv[a].loops.push((la.min(lb), la.max(lb)));
        } else {
            inv[a].ends.push(la);
            inv[b].ends.push(lb);
        }
    }
    for x in &mut inv {
        x.loops.sort_unstable();
        x.ends.sort_unstable();
    }
    inv
}

fn label_of(labels: &Labels<'_>, h: usize) -> u32 {
    labels.half_edge.get(h).copied().unwrap_or(0)
}

/// Vertices grouped into blocks of equal invariant, blocks in invariant order.
fn blocks(inv: &[VertexInvariant]) -> Vec<Vec<usize>> {
    let mut by_inv: BTreeMap<&VertexInvariant, Vec<usize>> = BTreeMap::new();
    for (v, x) in inv.iter().enumerate() {
        by_inv.entry(x).or_default().push(v);
    }
    by_inv.into_values().collect()
}

pub(crate) fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, first);
            out.push(p);
        }
    }
    out
}

/// Calls `f` with every way of choosing one permutation per block.
fn for_each_block_permutation(blocks: &[Vec<usize>], mut f: impl FnMut(&[Vec<usize>])) {
    let perms: Vec<Vec<Vec<usize>>> = blocks.iter().map(|b| permutations(b)).collect();
    let mut idx = vec![0usize; blocks.len()];
    loop {
        let choice: Vec<Vec<usize>> = idx.iter().zip(&perms).map(|(&i, p)| p[i].clone()).collect();
        f(&choice);
        let mut k = blocks.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < perms[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

pub(crate) fn canonicalize(graph: &StableGraph, labels: &Labels<'_>) -> CanonicalForm {
    let n = graph.num_legs();
    let inv = invariants(graph, labels);
    let blocks = blocks(&inv);
    let mut best: Option<CanonicalForm> = None;
    for_each_block_permutation(&blocks, |choice| {
        // canonical position -> old vertex
        let order: Vec<usize> = choice.iter().flatten().copied().collect();
        let mut vertex_map = vec![0; order.len()];
        for (pos, &old) in order.iter().enumerate() {
            vertex_map[old] = pos;
        }
        let mut key = vec![graph.num_vertices() as u32, n as u32, graph.num_edges() as u32];
        for &old in &order {
            let label = labels.vertex.get(old).map(Vec::as_slice).unwrap_or(&[]);
            key.push(graph.vertex_genus(old));
            key.push(label.len() as u32);
            key.extend_from_slice(label);
        }
        for (i, &v) in graph.legs().iter().enumerate() {
            key.push(vertex_map[v] as u32);
            key.push(label_of(labels, i));
        }
        let mut oriented: Vec<([u32; 4], usize, bool)> = graph
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(a, b))| {
                let (ea, eb) = (vertex_map[a] as u32, vertex_map[b] as u32);
                let (la, lb) = (label_of(labels, n + 2 * e), label_of(labels, n + 2 * e + 1));
                if (ea, la) <= (eb, lb) {
                    ([ea, eb, la, lb], e, false)
                } else {
                    ([eb, ea, lb, la], e, true)
                }
            })
            .collect();
        oriented.sort();
        for (t, _, _) in &oriented {
            key.extend_from_slice(t);
        }
        if best.as_ref().is_none_or(|b| key < b.key) {
            best = Some(CanonicalForm {
                key,
                vertex_map,
                edge_order: oriented.iter().map(|&(_, e, s)| (e, s)).collect(),
            });
        }
    });
    best.expect("at least one ordering")
}

/// Canonical form of an undecorated stable graph.
pub fn canonical_form(graph: &StableGraph) -> CanonicalForm {
    canonicalize(graph, &Labels { vertex: &[], half_edge: &[] })
}

/// The canonical representative of the isomorphism class of `graph`.
pub fn canonical_graph(graph: &StableGraph) -> StableGraph {
    let c = canonical_form(graph);
    graph.relabeled(&c.vertex_map, &c.edge_order)
}

/// Order of the automorphism group: permutations of `V` and `H` commuting with
/// the genus map, the vertex assignment, the involution and the marking.
pub fn automorphism_count(graph: &StableGraph) -> BigInt {
    let inv = invariants(graph, &Labels { vertex: &[], half_edge: &[] });
    let blocks = blocks(&inv);
    let original = edge_multiset(graph, &(0..graph.num_vertices()).collect::<Vec<_>>());
    let mut vertex_perms = 0u64;
    for_each_block_permutation(&blocks, |choice| {
        let mut sigma = vec![0; graph.num_vertices()];
        for (block, perm) in blocks.iter().zip(choice) {
            for (&from, &to) in block.iter().zip(perm) {
                sigma[from] = to;
            }
        }
        if graph.legs().iter().all(|&v| sigma[v] == v) && edge_multiset(graph, &sigma) == original {
            vertex_perms += 1;
        }
    });
    // half-edge freedom: parallel edges permute, loops also flip
    let mut mult: BTreeMap<(usize, usize), u32> = BTreeMap::new();
    for &(a, b) in graph.edges() {
        *mult.entry((a.min(b), a.max(b))).or_default() += 1;
    }
    let mut count = BigInt::from(vertex_perms);
    for (&(a, b), &m) in &mult {
        for k in 1..=m {
            count *= k;
        }
        if a == b {
            count *= BigInt::one() << m;
        }
    }
    count
}

fn edge_multiset(graph: &StableGraph, sigma: &[usize]) -> Vec<(usize, usize)> {
    let mut v: Vec<(usize, usize)> = graph
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (sigma[a], sigma[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    v.sort_unstable();
    v
}

/// An isomorphism between two stable graphs at the level of vertices and
/// half-edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    /// source vertex -> target vertex
    pub vertex: Vec<usize>,
    /// source half-edge -> target half-edge
    pub half_edge: Vec<usize>,
}

/// Every isomorphism from `a` to `b`.
pub fn isomorphisms(a: &StableGraph, b: &StableGraph) -> Vec<Isomorphism> {
    let empty = Labels { vertex: &[], half_edge: &[] };
    if a.num_vertices() != b.num_vertices()
        || a.num_edges() != b.num_edges()
        || a.num_legs() != b.num_legs()
    {
        return Vec::new();
    }
    let (ia, ib) = (invariants(a, &empty), invariants(b, &empty));
    let mut groups_a: BTreeMap<&VertexInvariant, Vec<usize>> = BTreeMap::new();
    let mut groups_b: BTreeMap<&VertexInvariant, Vec<usize>> = BTreeMap::new();
    for (v, x) in ia.iter().enumerate() {
        groups_a.entry(x).or_default().push(v);
    }
    for (v, x) in ib.iter().enumerate() {
        groups_b.entry(x).or_default().push(v);
    }
    if groups_a.len() != groups_b.len()
        || groups_a.iter().zip(&groups_b).any(|((ka, va), (kb, vb))| ka != kb || va.len() != vb.len())
    {
        return Vec::new();
    }
    let src_blocks: Vec<Vec<usize>> = groups_a.values().cloned().collect();
    let dst_blocks: Vec<Vec<usize>> = groups_b.values().cloned().collect();
    let n = a.num_legs();
    let mut out = Vec::new();
    for_each_block_permutation(&dst_blocks, |choice| {
        let mut sigma = vec![0; a.num_vertices()];
        for (block, perm) in src_blocks.iter().zip(choice) {
            for (&from, &to) in block.iter().zip(perm) {
                sigma[from] = to;
            }
        }
        if a.legs().iter().zip(b.legs()).any(|(&va, &vb)| sigma[va] != vb) {
            return;
        }
        // group edges by unordered endpoint pair in the target's labeling
        let mut src_groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (e, &(x, y)) in a.edges().iter().enumerate() {
            let (x, y) = (sigma[x], sigma[y]);
            src_groups.entry((x.min(y), x.max(y))).or_default().push(e);
        }
        let mut dst_groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (e, &(x, y)) in b.edges().iter().enumerate() {
            dst_groups.entry((x.min(y), x.max(y))).or_default().push(e);
        }
        if src_groups.len() != dst_groups.len()
            || src_groups.iter().zip(&dst_groups).any(|((ka, va), (kb, vb))| ka != kb || va.len() != vb.len())
        {
            return;
        }
        // enumerate edge bijections per group and loop orientations
        let mut partial = vec![(0..n).collect::<Vec<usize>>()];
        for ((_, se), (_, de)) in src_groups.iter().zip(&dst_groups) {
            let mut next = Vec::new();
            for perm in permutations(de) {
                for base in &partial {
                    let mut maps = vec![base.clone()];
                    for (&s, &d) in se.iter().zip(&perm) {
                        let (sx, _) = a.edges()[s];
                        let (dx, dy) = b.edges()[d];
                        let (s0, s1, d0, d1) = (n + 2 * s, n + 2 * s + 1, n + 2 * d, n + 2 * d + 1);
                        let mut grown = Vec::new();
                        for m in &maps {
                            let mut extend = |first: usize, second: usize| {
                                let mut m = m.clone();
                                if m.len() < n + 2 * a.num_edges() {
                                    m.resize(n + 2 * a.num_edges(), usize::MAX);
                                }
                                m[s0] = first;
                                m[s1] = second;
                                grown.push(m);
                            };
                            if dx == dy {
                                extend(d0, d1);
                                extend(d1, d0);
                            } else if sigma[sx] == dx {
                                extend(d0, d1);
                            } else {
                                extend(d1, d0);
                            }
                        }
                        maps = grown;
                    }
                    next.extend(maps);
                }
            }
            partial = next;
        }
        for half_edge in partial {
            let mut half_edge = half_edge;
            half_edge.resize(n + 2 * a.num_edges(), usize::MAX);
            out.push(Isomorphism { vertex: sigma.clone(), half_edge });
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(genera: Vec<u32>, legs: Vec<usize>, edges: Vec<(usize, usize)>) -> StableGraph {
        StableGraph::new(genera, legs, edges).unwrap()
    }

    #[test]
    fn automorphism_examples() {
        assert_eq!(automorphism_count(&StableGraph::trivial(2, 3)), BigInt::from(1));
        assert_eq!(automorphism_count(&g(vec![0], vec![0], vec![(0, 0)])), BigInt::from(2));
        let theta = g(vec![0, 0], vec![], vec![(0, 1), (0, 1), (0, 1)]);
        assert_eq!(automorphism_count(&theta), BigInt::from(12));
        let g1g1 = g(vec![1, 1], vec![], vec![(0, 1)]);
        assert_eq!(automorphism_count(&g1g1), BigInt::from(2));
        let two_loops = g(vec![0], vec![], vec![(0, 0), (0, 0)]);
        assert_eq!(automorphism_count(&two_loops), BigInt::from(8));
    }

    #[test]
    fn canonical_form_examples() {
        let a = g(vec![1, 0], vec![1], vec![(0, 1)]);
        let b = g(vec![0, 1], vec![0], vec![(1, 0)]);
        assert_eq!(canonical_form(&a).key, canonical_form(&b).key);
        let sym = g(vec![1, 1], vec![], vec![(0, 1)]);
        let swapped = g(vec![1, 1], vec![], vec![(1, 0)]);
        assert_eq!(canonical_form(&sym).key, canonical_form(&swapped).key);
        let loop11 = g(vec![0], vec![0], vec![(0, 0)]);
        assert_ne!(canonical_form(&loop11).key, canonical_form(&StableGraph::trivial(1, 1)).key);
        assert_eq!(canonical_form(&loop11).key_bytes().len(), 4 * canonical_form(&loop11).key.len());
    }

    #[test]
    fn isomorphisms_of_loop_graph() {
        let l = g(vec![0], vec![0], vec![(0, 0)]);
        let isos = isomorphisms(&l, &l);
        assert_eq!(isos.len(), 2);
        assert!(isos.iter().any(|i| i.half_edge == vec![0, 2, 1]));
        let t = StableGraph::trivial(1, 1);
        assert!(isomorphisms(&l, &t).is_empty());
        let theta = g(vec![0, 0], vec![], vec![(0, 1), (0, 1), (0, 1)]);
        assert_eq!(isomorphisms(&theta, &theta).len(), 12);
    }
}
