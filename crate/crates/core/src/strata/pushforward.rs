use super::decorated::kappa_mul;
use super::{DecoratedGraph, KappaMonomial, StrataElement, StrataError};
use crate::numerics::{binomial, Rational};

/// Result of forgetting a leg. `kappa_generated` is set when some term met a
/// psi power of two or more on the forgotten leg and produced a genuine kappa.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pushforward {
    pub element: StrataElement,
    pub kappa_generated: bool,
}

/// Mutable description of a decorated graph while legs and vertices move.
#[derive(Clone, Debug)]
struct Pieces {
    genera: Vec<u32>,
    kappa: Vec<KappaMonomial>,
    legs: Vec<(usize, u32)>,
    edges: Vec<(usize, usize, u32, u32)>,
}

impl Pieces {
    fn of(t: &DecoratedGraph) -> Self {
        let graph = t.graph();
        let d = t.decoration();
        let n = graph.num_legs();
        Pieces {
            genera: graph.genera().to_vec(),
            kappa: d.kappa.clone(),
            legs: graph.legs().iter().enumerate().map(|(i, &v)| (v, d.psi[i])).collect(),
            edges: graph
                .edges()
                .iter()
                .enumerate()
                .map(|(e, &(a, b))| (a, b, d.psi[n + 2 * e], d.psi[n + 2 * e + 1]))
                .collect(),
        }
    }

    fn psi_mut(&mut self, h: usize) -> &mut u32 {
        let n = self.legs.len();
        if h < n {
            return &mut self.legs[h].1;
        }
        let e = &mut self.edges[(h - n) / 2];
        if (h - n) % 2 == 0 {
            &mut e.2
        } else {
            &mut e.3
        }
    }

    fn remove_vertex(&mut self, v: usize) {
        self.genera.remove(v);
        self.kappa.remove(v);
        let shift = |w: usize| if w > v { w - 1 } else { w };
        for leg in &mut self.legs {
            leg.0 = shift(leg.0);
        }
        for e in &mut self.edges {
            e.0 = shift(e.0);
            e.1 = shift(e.1);
        }
    }

    fn finish(self) -> Option<DecoratedGraph> {
        DecoratedGraph::from_pieces(self.genera, self.kappa, &self.legs, &self.edges)
    }
}

impl StrataElement {
    /// Pushforward along the map forgetting the leg with the given marking.
    /// Legs with larger markings shift down by one.
    pub fn pushforward_forget(&self, marking: usize) -> Result<Pushforward, StrataError> {
        let (g, n) = self.ambient();
        if marking == 0 || marking > n {
            return Err(StrataError::LegOutOfRange { marking, n });
        }
        if 2 * g as i64 - 2 + n as i64 - 1 <= 0 {
            return Err(StrataError::UnstableTarget { g, n });
        }
        let mut out = StrataElement::zero(g, n - 1);
        let mut kappa_generated = false;
        for (t, c) in self.terms() {
            for (t, k) in forget_term(t, marking, &mut kappa_generated)? {
                out.add_term(t, c * &k);
            }
        }
        Ok(Pushforward { element: out, kappa_generated })
    }
}

fn forget_term(
    t: &DecoratedGraph,
    marking: usize,
    kappa_generated: &mut bool,
) -> Result<Vec<(DecoratedGraph, Rational)>, StrataError> {
    let graph = t.graph();
    let d = t.decoration();
    let h_l = marking - 1;
    let v = graph.legs()[h_l];
    let b = d.psi[h_l];
    let chi = graph.euler_char(v) - 1;
    let mut out = Vec::new();
    if chi > 0 {
        for (kept, s, k) in expand_kappa(&d.kappa[v]) {
            let mut base = Pieces::of(t);
            base.kappa[v] = kept;
            match b + s {
                0 => {
                    for h in graph.half_edges_at(v) {
                        if h == h_l || d.psi[h] == 0 {
                            continue;
                        }
                        let mut p = base.clone();
                        *p.psi_mut(h) -= 1;
                        p.legs.remove(h_l);
                        out.extend(p.finish().map(|t| (t, k.clone())));
                    }
                }
                1 => {
                    let mut p = base;
                    p.legs.remove(h_l);
                    out.extend(p.finish().map(|t| (t, &k * &Rational::from(chi))));
                }
                total => {
                    *kappa_generated = true;
                    let mut p = base;
                    kappa_mul(&mut p.kappa[v], total - 1, 1);
                    p.legs.remove(h_l);
                    out.extend(p.finish().map(|t| (t, k)));
                }
            }
        }
        return Ok(out);
    }
    // v is a genus-0 vertex with three half-edges: contract it away
    if !d.kappa[v].is_empty() || graph.half_edges_at(v).iter().any(|&h| d.psi[h] > 0) {
        return Err(StrataError::DecoratedContraction);
    }
    let n = graph.num_legs();
    let others: Vec<usize> = graph.half_edges_at(v).into_iter().filter(|&h| h != h_l).collect();
    let mut p = Pieces::of(t);
    let far = |h: usize| graph.partner(h).expect("edge half");
    match (others[0] < n, others[1] < n) {
        (true, false) | (false, true) => {
            let (leg, h) = if others[0] < n { (others[0], others[1]) } else { (others[1], others[0]) };
            let h2 = far(h);
            p.legs[leg] = (graph.half_edge_vertex(h2), d.psi[h2]);
            p.edges.remove((h - n) / 2);
        }
        (false, false) => {
            let (h1, h2) = (far(others[0]), far(others[1]));
            let (e1, e2) = ((others[0] - n) / 2, (others[1] - n) / 2);
            p.edges.push((graph.half_edge_vertex(h1), graph.half_edge_vertex(h2), d.psi[h1], d.psi[h2]));
            p.edges.remove(e1.max(e2));
            p.edges.remove(e1.min(e2));
        }
        (true, true) => unreachable!("a (0,3) graph has an unstable target"),
    }
    p.remove_vertex(v);
    p.legs.remove(h_l);
    out.extend(p.finish().map(|t| (t, Rational::one())));
    Ok(out)
}

/// Expands `prod kappa_i^x` at a vertex as `prod (pi^* kappa_i + psi_l^i)^x`:
/// returns (pulled-back monomial, extra psi_l power, coefficient).
fn expand_kappa(m: &KappaMonomial) -> Vec<(KappaMonomial, u32, Rational)> {
    let mut out = vec![(Vec::new(), 0, Rational::one())];
    for &(i, x) in m {
        let mut next = Vec::new();
        for (kept, s, k) in &out {
            for j in 0..=x {
                let mut kept = kept.clone();
                kappa_mul(&mut kept, i, x - j);
                next.push((kept, s + i * j, k * &Rational::from(binomial(x as i64, j as i64))));
            }
        }
        out = next;
    }
    out
}
