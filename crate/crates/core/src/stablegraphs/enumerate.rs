use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use super::canon::{canonical_form, canonical_graph};
use super::{GraphError, StableGraph};

/// All stable graphs of genus `g` with `n` legs, one per isomorphism class,
/// in canonical labeling and sorted by canonical key. `max_edges` restricts to
/// graphs with at most that many edges.
pub fn enumerate(g: u32, n: usize, max_edges: Option<usize>) -> Result<Vec<StableGraph>, GraphError> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(GraphError::UnstableType { g, n });
    }
    let top = 3 * g as usize + n - 3;
    let emax = max_edges.map_or(top, |m| m.min(top));
    let mut found: BTreeMap<Vec<u32>, StableGraph> = BTreeMap::new();
    for e in 0..=emax {
        for v in 1..=e + 1 {
            let h1 = e + 1 - v;
            if h1 as u32 > g {
                continue;
            }
            for skeleton in skeletons(v, e, g - h1 as u32, n) {
                distribute_legs(&skeleton, n, &mut found);
            }
        }
    }
    Ok(found.into_values().collect())
}

type CacheKey = (u32, usize, Option<usize>);

/// Memoized [`enumerate`].
pub fn enumerate_cached(g: u32, n: usize, max_edges: Option<usize>) -> Result<Arc<Vec<StableGraph>>, GraphError> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Arc<Vec<StableGraph>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache poisoned").get(&(g, n, max_edges)) {
        return Ok(hit.clone());
    }
    let list = Arc::new(enumerate(g, n, max_edges)?);
    cache.lock().expect("cache poisoned").insert((g, n, max_edges), list.clone());
    Ok(list)
}

/// Connected leg-free multigraphs on `v` vertices with `e` edges and vertex
/// genera summing to `genus_sum`, deduplicated up to isomorphism, keeping only
/// those that at most `n` legs could stabilize.
fn skeletons(v: usize, e: usize, genus_sum: u32, n: usize) -> Vec<StableGraph> {
    let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a..v).map(move |b| (a, b))).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for genera in nondecreasing_compositions(genus_sum, v) {
        for_each_multiset(pairs.len(), e, &mut |choice: &[usize]| {
            let edges = choice.iter().map(|&i| pairs[i]).collect();
            let graph = StableGraph::new(genera.clone(), Vec::new(), edges).expect("indices in range");
            if !graph.is_connected() {
                return;
            }
            let needed: i64 = (0..v).map(|x| (1 - graph.euler_char(x)).max(0)).sum();
            if needed > n as i64 {
                return;
            }
            if seen.insert(canonical_form(&graph).key) {
                out.push(graph);
            }
        });
    }
    out
}

fn distribute_legs(skeleton: &StableGraph, n: usize, found: &mut BTreeMap<Vec<u32>, StableGraph>) {
    let v = skeleton.num_vertices();
    let mut legs = vec![0usize; n];
    loop {
        let graph = StableGraph::new(skeleton.genera().to_vec(), legs.clone(), skeleton.edges().to_vec())
            .expect("indices in range");
        if graph.is_stable() {
            let key = canonical_form(&graph).key;
            found.entry(key).or_insert_with(|| canonical_graph(&graph));
        }
        // odometer over V^n leg placements
        let mut k = n;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            legs[k] += 1;
            if legs[k] < v {
                break;
            }
            legs[k] = 0;
        }
    }
}

fn nondecreasing_compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    fn rec(total: u32, parts: usize, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in min..=total {
            if x * parts as u32 > total {
                break;
            }
            cur.push(x);
            rec(total - x, parts - 1, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, 0, &mut Vec::new(), &mut out);
    out
}

/// Calls `f` on each nondecreasing sequence of length `k` over `0..m`.
fn for_each_multiset(m: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(m, k, i, cur, f);
            cur.pop();
        }
    }
    if k > 0 && m == 0 {
        return;
    }
    rec(m, k, 0, &mut Vec::new(), f);
}
