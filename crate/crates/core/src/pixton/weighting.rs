use std::collections::VecDeque;

use super::{AVector, PixtonError};
use crate::stablegraphs::StableGraph;

/// Residues in `0..r` on every half-edge (legs first, then edge halves).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Weighting {
    pub values: Vec<u64>,
}

/// Spanning-tree plan for a connected multigraph: tree edges are solved by
/// peeling leaves, the rest carry free residues.
#[derive(Clone, Debug)]
pub(crate) struct TreePlan {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    /// BFS order, root first
    order: Vec<usize>,
    /// edge to the parent and whether the vertex sits at the edge's first end
    parent: Vec<Option<(usize, bool)>>,
    /// parent vertex
    up: Vec<usize>,
    free: Vec<usize>,
}

impl TreePlan {
    pub(crate) fn new(num_vertices: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj = vec![Vec::new(); num_vertices];
        for (e, &(a, b)) in edges.iter().enumerate() {
            if a != b {
                adj[a].push((e, b, false));
                adj[b].push((e, a, true));
            }
        }
        let mut seen = vec![false; num_vertices];
        let mut parent = vec![None; num_vertices];
        let mut up = vec![0; num_vertices];
        let mut tree = vec![false; edges.len()];
        let mut order = Vec::with_capacity(num_vertices);
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &(e, w, w_first) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((e, w_first));
                    up[w] = v;
                    tree[e] = true;
                    queue.push_back(w);
                }
            }
        }
        assert_eq!(order.len(), num_vertices, "graph must be connected");
        let free = (0..edges.len()).filter(|&e| !tree[e]).collect();
        TreePlan { num_vertices, edges: edges.to_vec(), order, parent, up, free }
    }

    pub(crate) fn num_free(&self) -> usize {
        self.free.len()
    }

    /// Calls `f` with the first-half residue of every edge, for every
    /// weighting with the given vertex charges mod `r`.
    pub(crate) fn for_each(&self, charges: &[i64], r: u64, mut f: impl FnMut(&[(u64, u64)])) {
        let rr = r as i64;
        let base: Vec<u64> = charges.iter().map(|&c| c.rem_euclid(rr) as u64).collect();
        let mut free_vals = vec![0u64; self.free.len()];
        let mut weights = vec![(0u64, 0u64); self.edges.len()];
        loop {
            let mut acc = base.clone();
            for (&e, &x) in self.free.iter().zip(&free_vals) {
                let (a, b) = self.edges[e];
                let y = (r - x) % r;
                weights[e] = (x, y);
                acc[a] = (acc[a] + x) % r;
                acc[b] = (acc[b] + y) % r;
            }
            for &v in self.order.iter().skip(1).rev() {
                let (e, v_first) = self.parent[v].expect("non-root has a parent");
                let here = (r - acc[v]) % r;
                let there = (r - here) % r;
                weights[e] = if v_first { (here, there) } else { (there, here) };
                let p = self.up[v];
                acc[p] = (acc[p] + there) % r;
            }
            debug_assert!(self.num_vertices == 0 || acc[self.order[0]] == 0);
            f(&weights);
            // odometer over free residues
            let mut k = 0;
            loop {
                if k == free_vals.len() {
                    return;
                }
                free_vals[k] += 1;
                if free_vals[k] < r {
                    break;
                }
                free_vals[k] = 0;
                k += 1;
            }
        }
    }
}

/// Vertex charges `A_v = sum of a_i over legs at v`.
pub(crate) fn vertex_charges(graph: &StableGraph, a: &AVector) -> Vec<i64> {
    let mut c = vec![0; graph.num_vertices()];
    for (i, &v) in graph.legs().iter().enumerate() {
        c[v] += a.values()[i];
    }
    c
}

/// Every weighting mod `r` on `graph` with leg residues `a_i mod r`.
pub fn enumerate_weightings(graph: &StableGraph, a: &AVector, r: u64) -> Result<Vec<Weighting>, PixtonError> {
    if r == 0 {
        return Err(PixtonError::ZeroModulus);
    }
    if a.len() != graph.num_legs() {
        return Err(PixtonError::AVectorLength { expected: graph.num_legs(), got: a.len() });
    }
    let legs: Vec<u64> = a.values().iter().map(|&x| x.rem_euclid(r as i64) as u64).collect();
    let plan = TreePlan::new(graph.num_vertices(), graph.edges());
    let mut out = Vec::new();
    plan.for_each(&vertex_charges(graph, a), r, |w| {
        let mut values = legs.clone();
        for &(x, y) in w {
            values.push(x);
            values.push(y);
        }
        out.push(Weighting { values });
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stablegraphs::enumerate;

    fn is_valid(graph: &StableGraph, a: &AVector, r: u64, w: &Weighting) -> bool {
        let n = graph.num_legs();
        let legs_ok = (0..n).all(|i| w.values[i] == a.values()[i].rem_euclid(r as i64) as u64);
        let edges_ok = (0..graph.num_edges()).all(|e| (w.values[n + 2 * e] + w.values[n + 2 * e + 1]) % r == 0);
        let vertices_ok = (0..graph.num_vertices())
            .all(|v| graph.half_edges_at(v).iter().map(|&h| w.values[h]).sum::<u64>() % r == 0);
        legs_ok && edges_ok && vertices_ok
    }

    #[test]
    fn examples() {
        let t = StableGraph::trivial(2, 3);
        let a = AVector::new(vec![3, -1, -2]).unwrap();
        assert_eq!(enumerate_weightings(&t, &a, 4).unwrap().len(), 1);
        let lp = StableGraph::new(vec![0], vec![0], vec![(0, 0)]).unwrap();
        assert_eq!(enumerate_weightings(&lp, &AVector::new(vec![0]).unwrap(), 5).unwrap().len(), 5);
        let tree = StableGraph::new(vec![1, 0], vec![1, 1], vec![(0, 1)]).unwrap();
        let a = AVector::new(vec![2, -2]).unwrap();
        let ws = enumerate_weightings(&tree, &a, 7).unwrap();
        assert_eq!(ws, vec![Weighting { values: vec![2, 5, 0, 0] }]);
    }

    #[test]
    fn count_and_validity_by_brute_force() {
        for (g, n) in [(1, 2), (2, 1), (1, 3), (0, 5)] {
            let graphs = enumerate(g, n, None).unwrap();
            let mut vals: Vec<i64> = (1..n as i64).collect();
            vals.insert(0, -vals.iter().sum::<i64>());
            let a = AVector::new(vals).unwrap();
            for graph in &graphs {
                for r in 2..=5u64 {
                    let ws = enumerate_weightings(graph, &a, r).unwrap();
                    assert_eq!(ws.len() as u64, r.pow(graph.h1()));
                    assert!(ws.iter().all(|w| is_valid(graph, &a, r, w)));
                    // brute force over all residues on edge halves
                    let m = graph.num_edges();
                    let mut count = 0;
                    for code in 0..r.pow(2 * m as u32) {
                        let mut values: Vec<u64> =
                            a.values().iter().map(|&x| x.rem_euclid(r as i64) as u64).collect();
                        let mut c = code;
                        for _ in 0..2 * m {
                            values.push(c % r);
                            c /= r;
                        }
                        if is_valid(graph, &a, r, &Weighting { values }) {
                            count += 1;
                        }
                    }
                    assert_eq!(count, ws.len());
                }
            }
        }
    }
}
