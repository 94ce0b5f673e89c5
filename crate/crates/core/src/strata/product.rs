use std::collections::BTreeMap;

use super::decorated::kappa_mul;
use super::{DecoratedGraph, Decoration, KappaMonomial, StrataElement, StrataError};
use crate::numerics::{factorial, Rational};
use crate::stablegraphs::{automorphism_count, enumerate_cached, isomorphisms, Contraction, Isomorphism, StableGraph};

impl StrataElement {
    /// The excess-intersection product. Correctness is tested for factors
    /// with at most three edges.
    pub fn multiply(&self, other: &Self) -> Result<Self, StrataError> {
        self.check_ambient(other)?;
        let (g, n) = self.ambient();
        let mut out = StrataElement::zero(g, n);
        let top = (3 * g as usize + n).saturating_sub(3) as u32;
        for (t1, c1) in self.terms() {
            for (t2, c2) in other.terms() {
                if t1.degree() + t2.degree() > top {
                    continue;
                }
                let c = c1 * c2;
                for (t, k) in basic_product(t1, t2)? {
                    out.add_term(t, &c * &k);
                }
            }
        }
        Ok(out)
    }

    /// Multiplies every term by `prod psi_leg^e` on the legs; terms that break
    /// the degree condition vanish.
    pub fn multiply_by_psi(&self, leg_exponents: &BTreeMap<usize, u32>) -> Result<Self, StrataError> {
        let (g, n) = self.ambient();
        for &m in leg_exponents.keys() {
            if m == 0 || m > n {
                return Err(StrataError::LegOutOfRange { marking: m, n });
            }
        }
        let mut out = StrataElement::zero(g, n);
        for (t, c) in self.terms() {
            let mut d = t.decoration().clone();
            for (&m, &e) in leg_exponents {
                d.psi[m - 1] += e;
            }
            if let Some(t) = DecoratedGraph::new(t.graph(), &d) {
                out.add_term(t, c.clone());
            }
        }
        Ok(out)
    }
}

/// `[G1, g1] . [G2, g2]` as a list of (term, coefficient).
fn basic_product(a: &DecoratedGraph, b: &DecoratedGraph) -> Result<Vec<(DecoratedGraph, Rational)>, StrataError> {
    let (g, n) = (a.graph().genus(), a.graph().num_legs());
    let (e1, e2) = (a.graph().num_edges(), b.graph().num_edges());
    let mut acc: BTreeMap<DecoratedGraph, Rational> = BTreeMap::new();
    for graph in enumerate_cached(g, n, Some(e1 + e2))?.iter() {
        let ne = graph.num_edges();
        if ne < e1.max(e2) {
            continue;
        }
        let weight = Rational::from(automorphism_count(graph)).recip();
        let firsts = kept_subsets(ne, e1);
        let seconds = kept_subsets(ne, e2);
        for s1 in &firsts {
            let c1 = graph.contract(&complement(s1));
            let iso1 = isomorphisms(&c1.graph, a.graph());
            if iso1.is_empty() {
                continue;
            }
            for s2 in seconds.iter().filter(|s2| s1.iter().zip(s2.iter()).all(|(&x, &y)| x || y)) {
                let c2 = graph.contract(&complement(s2));
                let iso2 = isomorphisms(&c2.graph, b.graph());
                if iso2.is_empty() {
                    continue;
                }
                let excess: Vec<usize> = (0..ne).filter(|&e| s1[e] && s2[e]).collect();
                for phi1 in &iso1 {
                    let pulled1 = pullback(graph, &c1, phi1, a.decoration());
                    for phi2 in &iso2 {
                        let pulled2 = pullback(graph, &c2, phi2, b.decoration());
                        for (d1, k1) in &pulled1 {
                            for (d2, k2) in &pulled2 {
                                let base = combine(d1, d2);
                                let k = &(k1 * k2) * &weight;
                                add_excess(graph, &base, &excess, &k, &mut acc);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).collect())
}

fn kept_subsets(ne: usize, k: usize) -> Vec<Vec<bool>> {
    (0u32..1 << ne)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..ne).map(|e| m >> e & 1 == 1).collect())
        .collect()
}

fn complement(keep: &[bool]) -> Vec<bool> {
    keep.iter().map(|&x| !x).collect()
}

/// Pulls a decoration on the target of `phi` back to `graph` along the
/// contraction. Kappa classes spread over the preimage vertices.
fn pullback(graph: &StableGraph, c: &Contraction, phi: &Isomorphism, d: &Decoration) -> Vec<(Decoration, Rational)> {
    let n = graph.num_legs();
    let mut psi = vec![0; graph.num_half_edges()];
    for (h, y) in psi.iter_mut().enumerate() {
        if let Some(hc) = c.half_edge_map(n, h) {
            *y = d.psi[phi.half_edge[hc]];
        }
    }
    let mut out = vec![(Decoration { kappa: vec![Vec::new(); graph.num_vertices()], psi }, Rational::one())];
    for (u, monomial) in d.kappa.iter().enumerate() {
        let preimage: Vec<usize> =
            (0..graph.num_vertices()).filter(|&w| phi.vertex[c.vertex_map[w]] == u).collect();
        for &(index, exp) in monomial {
            let mut next = Vec::new();
            for split in compositions(exp, preimage.len()) {
                let mut k = Rational::from(factorial(exp as i64).expect("nonnegative"));
                for &x in &split {
                    k /= Rational::from(factorial(x as i64).expect("nonnegative"));
                }
                for (dec, c0) in &out {
                    let mut dec = dec.clone();
                    for (&w, &x) in preimage.iter().zip(&split) {
                        kappa_mul(&mut dec.kappa[w], index, x);
                    }
                    next.push((dec, c0 * &k));
                }
            }
            out = next;
        }
    }
    out
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn combine(a: &Decoration, b: &Decoration) -> Decoration {
    let kappa: Vec<KappaMonomial> = a
        .kappa
        .iter()
        .zip(&b.kappa)
        .map(|(x, y)| {
            let mut m = x.clone();
            for &(i, e) in y {
                kappa_mul(&mut m, i, e);
            }
            m
        })
        .collect();
    let psi = a.psi.iter().zip(&b.psi).map(|(x, y)| x + y).collect();
    Decoration { kappa, psi }
}

/// Multiplies by `prod_{e in excess} -(psi_h + psi_h')` and accumulates.
fn add_excess(
    graph: &StableGraph,
    base: &Decoration,
    excess: &[usize],
    k: &Rational,
    acc: &mut BTreeMap<DecoratedGraph, Rational>,
) {
    let n = graph.num_legs();
    let sign = if excess.len() % 2 == 1 { Rational::from(-1) } else { Rational::one() };
    let k = k * &sign;
    for choice in 0u32..1 << excess.len() {
        let mut d = base.clone();
        for (j, &e) in excess.iter().enumerate() {
            d.psi[n + 2 * e + (choice >> j & 1) as usize] += 1;
        }
        if let Some(t) = DecoratedGraph::new(graph, &d) {
            *acc.entry(t).or_insert_with(Rational::zero) += &k;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_11() -> DecoratedGraph {
        DecoratedGraph::from_pieces(vec![0], vec![vec![]], &[(0, 0)], &[(0, 0, 0, 0)]).unwrap()
    }

    #[test]
    fn unit_is_identity() {
        let x = StrataElement::from_term(loop_11(), Rational::from(5))
            .add(&StrataElement::psi_monomial(1, &[1]))
            .unwrap();
        let u = StrataElement::unit(1, 1);
        assert_eq!(u.multiply(&x).unwrap(), x);
        assert_eq!(x.multiply(&u).unwrap(), x);
    }

    #[test]
    fn loop_times_psi() {
        // psi on the leg of a trivalent genus-0 vertex is truncated
        let l = StrataElement::from_term(loop_11(), Rational::one());
        assert!(l.multiply(&StrataElement::psi_monomial(1, &[1])).unwrap().is_zero());
    }

    #[test]
    fn loop_squared_truncates() {
        let l = StrataElement::from_term(loop_11(), Rational::one());
        assert!(l.multiply(&l).unwrap().is_zero());
    }

    #[test]
    fn boundary_self_intersection_in_m04() {
        // delta^2 = -psi_h - psi_h' on the one-edge graph; all vanish on M_{0,4}
        let d = DecoratedGraph::from_pieces(vec![0, 0], vec![vec![], vec![]], &[(0, 0), (0, 0), (1, 0), (1, 0)], &[(0, 1, 0, 0)])
            .unwrap();
        let x = StrataElement::from_term(d, Rational::one());
        assert!(x.multiply(&x).unwrap().is_zero());
    }

    #[test]
    fn separating_divisors_meet() {
        // in M_{0,5}: D_{12} . D_{45} is the two-edge graph (12)(3)(45)
        let d12 = DecoratedGraph::from_pieces(
            vec![0, 0],
            vec![vec![], vec![]],
            &[(0, 0), (0, 0), (1, 0), (1, 0), (1, 0)],
            &[(0, 1, 0, 0)],
        )
        .unwrap();
        let d45 = DecoratedGraph::from_pieces(
            vec![0, 0],
            vec![vec![], vec![]],
            &[(0, 0), (0, 0), (0, 0), (1, 0), (1, 0)],
            &[(0, 1, 0, 0)],
        )
        .unwrap();
        let both = DecoratedGraph::from_pieces(
            vec![0, 0, 0],
            vec![vec![]; 3],
            &[(0, 0), (0, 0), (1, 0), (2, 0), (2, 0)],
            &[(0, 1, 0, 0), (1, 2, 0, 0)],
        )
        .unwrap();
        let p = StrataElement::from_term(d12, Rational::one())
            .multiply(&StrataElement::from_term(d45, Rational::one()))
            .unwrap();
        assert_eq!(p, StrataElement::from_term(both, Rational::one()));
    }

    #[test]
    fn kappa_pulls_back_to_both_sides() {
        // kappa_1 . [g1--g1] on M_2
        let graph = StableGraph::trivial(2, 0);
        let mut d = Decoration::trivial(&graph);
        d.kappa[0] = vec![(1, 1)];
        let k1 = StrataElement::from_term(DecoratedGraph::new(&graph, &d).unwrap(), Rational::one());
        let delta = StrataElement::from_term(
            DecoratedGraph::from_pieces(vec![1, 1], vec![vec![], vec![]], &[], &[(0, 1, 0, 0)]).unwrap(),
            Rational::one(),
        );
        let p = k1.multiply(&delta).unwrap();
        let expected =
            DecoratedGraph::from_pieces(vec![1, 1], vec![vec![(1, 1)], vec![]], &[], &[(0, 1, 0, 0)]).unwrap();
        // xi^* kappa_1 = kappa_1 on either vertex, and the two are isomorphic
        assert_eq!(p, StrataElement::from_term(expected, Rational::from(2)));
    }
}
