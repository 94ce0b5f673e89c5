#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use trr_core::numerics::Rational;
use trr_core::stablegraphs::{canonical_form, enumerate, StableGraph};
use trr_core::strata::{kappa_mul, DecoratedGraph, Decoration, StrataElement};

/// Every connected stable graph of type `(g, n)` by exhaustive generation over
/// vertex genera, leg placements and edge multisets, deduplicated by
/// canonical key.
pub fn generate_and_filter(g: u32, n: usize) -> usize {
    let max_vertices = (2 * g as i64 - 2 + n as i64).max(1) as usize;
    let mut keys = BTreeSet::new();
    for v in 1..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a..v).map(move |b| (a, b))).collect();
        for h1 in 0..=g as usize {
            let e = v - 1 + h1;
            for edges in multisets(&pairs, e) {
                for genera in compositions(g - h1 as u32, v) {
                    for legs in tuples(v, n) {
                        let Ok(graph) = StableGraph::new(genera.clone(), legs, edges.clone()) else { continue };
                        if graph.is_connected() && graph.is_stable() && graph.genus() == g {
                            keys.insert(canonical_form(&graph).key);
                        }
                    }
                }
            }
        }
    }
    keys.len()
}

fn multisets(items: &[(usize, usize)], k: usize) -> Vec<Vec<(usize, usize)>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in multisets(&items[i..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut r| {
                r.insert(0, first);
                r
            })
        })
        .collect()
}

fn tuples(v: usize, n: usize) -> Vec<Vec<usize>> {
    (0..n).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|t| {
                (0..v).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect()
    })
}

pub fn shuffled(graph: &StableGraph, rng: &mut StdRng) -> (StableGraph, Vec<usize>, Vec<(usize, bool)>) {
    let v = graph.num_vertices();
    let mut sigma: Vec<usize> = (0..v).collect();
    sigma.shuffle(rng);
    let mut genera = vec![0; v];
    for (old, &new) in sigma.iter().enumerate() {
        genera[new] = graph.vertex_genus(old);
    }
    let legs = graph.legs().iter().map(|&x| sigma[x]).collect();
    let mut order: Vec<(usize, bool)> = (0..graph.num_edges()).map(|e| (e, rng.gen_bool(0.5))).collect();
    order.shuffle(rng);
    let edges = order
        .iter()
        .map(|&(e, flip)| {
            let (a, b) = graph.edges()[e];
            if flip {
                (sigma[b], sigma[a])
            } else {
                (sigma[a], sigma[b])
            }
        })
        .collect();
    (StableGraph::new(genera, legs, edges).unwrap(), sigma, order)
}

pub fn random_term(rng: &mut StdRng, graphs: &[StableGraph], max_psi: u32) -> Option<DecoratedGraph> {
    let graph = &graphs[rng.gen_range(0..graphs.len())];
    let mut d = Decoration::trivial(graph);
    for p in d.psi.iter_mut() {
        *p = rng.gen_range(0..=max_psi);
    }
    for m in d.kappa.iter_mut() {
        if rng.gen_bool(0.25) {
            kappa_mul(m, rng.gen_range(1..=2), 1);
        }
    }
    DecoratedGraph::new(graph, &d)
}

pub fn random_element(rng: &mut StdRng, g: u32, n: usize, terms: usize) -> StrataElement {
    let graphs = enumerate(g, n, None).unwrap();
    let mut x = StrataElement::zero(g, n);
    for _ in 0..terms {
        if let Some(t) = random_term(rng, &graphs, 2) {
            x.add_term(t, Rational::new(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=4)));
        }
    }
    x
}

pub fn random_homogeneous(rng: &mut StdRng, g: u32, n: usize, d: u32) -> StrataElement {
    let x = random_element(rng, g, n, 8);
    x.degree_component(d)
}
