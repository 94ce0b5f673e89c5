use std::collections::BTreeMap;

use rayon::prelude::*;

use super::weighting::{vertex_charges, TreePlan};
use super::{AVector, PixtonError};
use crate::numerics::{factorial, interpolate_coeffs, Rational, SparsePoly};
use crate::stablegraphs::{automorphism_count, enumerate_cached, StableGraph};
use crate::strata::{DecoratedGraph, Decoration, StrataElement};

/// A strata element whose coefficients are polynomials in `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RPolynomialClass {
    pub g: u32,
    pub n: usize,
    pub terms: BTreeMap<DecoratedGraph, SparsePoly>,
    /// sample moduli used by the fit, held-out nodes included
    pub nodes: Vec<i64>,
}

impl RPolynomialClass {
    pub fn constant_term(&self) -> StrataElement {
        let mut x = StrataElement::zero(self.g, self.n);
        for (t, p) in &self.terms {
            x.add_term(t.clone(), p.constant_term());
        }
        x
    }

    pub fn evaluate(&self, r: i64) -> StrataElement {
        let mut x = StrataElement::zero(self.g, self.n);
        for (t, p) in &self.terms {
            x.add_term(t.clone(), p.eval(&[Rational::from(r)]));
        }
        x
    }
}

/// Per-key coefficient lists in `r` and the nodes used.
pub(crate) type RFit<K> = (BTreeMap<K, Vec<Rational>>, Vec<i64>);

/// Fits every keyed sample sequence by a polynomial in `r` on the nodes
/// `r0, r0 + 1, ...`, starting with `start` nodes and adding one at a time
/// until two further held-out nodes are reproduced exactly.
pub(crate) fn fit_in_r<K: Ord + Clone>(
    mut sample: impl FnMut(i64) -> Result<BTreeMap<K, Rational>, PixtonError>,
    r0: i64,
    start: usize,
    budget: usize,
) -> Result<RFit<K>, PixtonError> {
    let mut samples: Vec<BTreeMap<K, Rational>> = Vec::new();
    let mut count = start.max(1);
    while count <= budget {
        while samples.len() < count + 2 {
            samples.push(sample(r0 + samples.len() as i64)?);
        }
        let keys: Vec<K> = {
            let mut all: Vec<K> = samples.iter().flat_map(|s| s.keys().cloned()).collect();
            all.sort();
            all.dedup();
            all
        };
        let mut fits = BTreeMap::new();
        let mut ok = true;
        for k in keys {
            let value = |j: usize| samples[j].get(&k).cloned().unwrap_or_else(Rational::zero);
            let nodes: Vec<(Rational, Rational)> =
                (0..count).map(|j| (Rational::from(r0 + j as i64), value(j))).collect();
            let coeffs = interpolate_coeffs(&nodes).expect("distinct nodes");
            if (count..count + 2).any(|j| horner(&coeffs, &Rational::from(r0 + j as i64)) != value(j)) {
                ok = false;
                break;
            }
            fits.insert(k, coeffs);
        }
        if ok {
            let nodes = (0..count as i64 + 2).map(|j| r0 + j).collect();
            return Ok((fits, nodes));
        }
        count += 1;
    }
    Err(PixtonError::FitUnstable { budget })
}

pub(crate) fn horner(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| &(&acc * x) + c)
}

/// `exp(c x)` truncated at degree `cap`, as coefficients.
pub(crate) fn exp_series(c: &Rational, cap: u32) -> Vec<Rational> {
    let mut out = vec![Rational::one()];
    for k in 1..=cap {
        let next = &(&out[k as usize - 1] * c) / &Rational::from(k as i64);
        out.push(next);
    }
    out
}

/// Coefficients of `(1 - exp(-t x)) / x` in `x`, up to degree `cap`.
pub(crate) fn edge_series(t: &Rational, cap: u32) -> Vec<Rational> {
    (0..=cap)
        .map(|m| {
            let sign = if m % 2 == 0 { Rational::one() } else { Rational::from(-1) };
            let f = Rational::from(factorial(m as i64 + 1).expect("nonnegative"));
            &(&sign * &t.pow(m + 1)) / &f
        })
        .collect()
}

/// `sum_m series[m] (psi_h + psi_h')^m` over all half-edge variables.
fn edge_poly(nh: usize, h: usize, h2: usize, series: &[Rational], cap: u32) -> SparsePoly {
    let vars = half_edge_names(nh);
    let mut p = SparsePoly::zero(vars).with_degree_cap(cap);
    for (m, c) in series.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let m = m as u32;
        for j in 0..=m {
            let mut e = vec![0; nh];
            e[h] += j;
            e[h2] += m - j;
            p.add_term(e, c * &Rational::from(crate::numerics::binomial(m as i64, j as i64)));
        }
    }
    p
}

pub(crate) fn half_edge_names(nh: usize) -> Vec<String> {
    (0..nh).map(|h| format!("h{h}")).collect()
}

fn check_inputs(g: u32, n: usize, a: &AVector, dmax: u32) -> Result<(), PixtonError> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(crate::stablegraphs::GraphError::UnstableType { g, n }.into());
    }
    if a.len() != n {
        return Err(PixtonError::AVectorLength { expected: n, got: a.len() });
    }
    let top = 3 * g + n as u32 - 3;
    if dmax > top {
        return Err(PixtonError::DegreeTooLarge { d: dmax, max: top });
    }
    Ok(())
}

/// `sum_G 1/|Aut G| r^{-h1} sum_w [G, gamma_w]` through degree `dmax`.
pub fn pixton_fixed_r(g: u32, n: usize, a: &AVector, r: u64, dmax: u32) -> Result<StrataElement, PixtonError> {
    check_inputs(g, n, a, dmax)?;
    if r == 0 {
        return Err(PixtonError::ZeroModulus);
    }
    let graphs = enumerate_cached(g, n, Some(dmax as usize))?;
    let parts: Vec<StrataElement> =
        graphs.par_iter().map(|graph| graph_sum_fixed_r(graph, g, n, a, r, dmax)).collect();
    let mut out = StrataElement::zero(g, n);
    for p in parts {
        out = out.add(&p)?;
    }
    Ok(out)
}

fn graph_sum_fixed_r(graph: &StableGraph, g: u32, n: usize, a: &AVector, r: u64, dmax: u32) -> StrataElement {
    let mut out = StrataElement::zero(g, n);
    let cap = dmax - graph.num_edges() as u32;
    let nh = graph.num_half_edges();
    let mut legs = SparsePoly::constant(half_edge_names(nh), Rational::one()).with_degree_cap(cap);
    for (i, &ai) in a.values().iter().enumerate() {
        let series = exp_series(&Rational::new(ai * ai, 2), cap);
        let mut p = SparsePoly::zero(half_edge_names(nh)).with_degree_cap(cap);
        for (k, c) in series.into_iter().enumerate() {
            let mut e = vec![0; nh];
            e[i] = k as u32;
            p.add_term(e, c);
        }
        legs = legs.mul(&p);
    }
    let scale = (Rational::from(automorphism_count(graph)) * Rational::from(r).pow(graph.h1())).recip();
    let mut total = SparsePoly::zero(half_edge_names(nh)).with_degree_cap(cap);
    let plan = TreePlan::new(graph.num_vertices(), graph.edges());
    plan.for_each(&vertex_charges(graph, a), r, |w| {
        let mut term = legs.clone();
        for (e, &(x, y)) in w.iter().enumerate() {
            let t = Rational::new((x * y) as i64, 2);
            if t.is_zero() {
                return;
            }
            let h = n + 2 * e;
            term = term.mul(&edge_poly(nh, h, h + 1, &edge_series(&t, cap), cap));
        }
        total = total.add(&term);
    });
    for (m, c) in total.terms() {
        let d = Decoration { kappa: vec![Vec::new(); graph.num_vertices()], psi: m.clone() };
        if let Some(t) = DecoratedGraph::new(graph, &d) {
            out.add_term(t, c * &scale);
        }
    }
    out
}

/// Exact polynomial dependence on `r` of the fixed-`r` class, found by
/// adaptive sampling.
pub fn pixton_r_polynomial(g: u32, n: usize, a: &AVector, dmax: u32) -> Result<RPolynomialClass, PixtonError> {
    check_inputs(g, n, a, dmax)?;
    let amax = a.values().iter().map(|x| x.abs()).max().unwrap_or(0);
    let asum: i64 = a.values().iter().map(|x| x.abs()).sum();
    let r0 = (2 * amax * dmax as i64).max(asum) + 3;
    let start = dmax as usize + 2;
    let budget = 2 * dmax as usize + 8;
    let (fits, nodes) = fit_in_r(
        |r| {
            let x = pixton_fixed_r(g, n, a, r as u64, dmax)?;
            Ok(x.terms().iter().map(|(t, c)| (t.clone(), c.clone())).collect())
        },
        r0,
        start,
        budget,
    )?;
    let terms = fits
        .into_iter()
        .map(|(t, c)| (t, SparsePoly::univariate("r", &c)))
        .filter(|(_, p)| !p.is_zero())
        .collect();
    Ok(RPolynomialClass { g, n, terms, nodes })
}

/// Pixton's class through degree `dmax`: the constant term in `r`.
pub fn pixton_constant_term(g: u32, n: usize, a: &AVector, dmax: u32) -> Result<StrataElement, PixtonError> {
    Ok(pixton_r_polynomial(g, n, a, dmax)?.constant_term())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_zero_is_unit() {
        for (g, n) in [(0, 3), (1, 1), (1, 2), (2, 1)] {
            let mut v = vec![0i64; n];
            if n >= 2 {
                v[0] = 3;
                v[1] = -3;
            }
            let a = AVector::new(v).unwrap();
            for r in [1, 2, 5] {
                assert_eq!(pixton_fixed_r(g, n, &a, r, 0).unwrap(), StrataElement::unit(g, n));
            }
        }
    }

    #[test]
    fn series_coefficients() {
        let e = edge_series(&Rational::from(2), 2);
        assert_eq!(e, vec![Rational::from(2), Rational::from(-2), Rational::new(4, 3)]);
        let x = exp_series(&Rational::new(1, 2), 2);
        assert_eq!(x, vec![Rational::one(), Rational::new(1, 2), Rational::new(1, 8)]);
    }

    #[test]
    fn fit_recovers_polynomial() {
        let (fits, nodes) = fit_in_r(
            |r| Ok(BTreeMap::from([(0, Rational::from(r * r - 3 * r + 7))])),
            10,
            1,
            10,
        )
        .unwrap();
        assert_eq!(fits[&0], vec![Rational::from(7), Rational::from(-3), Rational::one()]);
        assert_eq!(nodes.len(), 5);
    }

    #[test]
    fn fit_fails_on_non_polynomial() {
        let res = fit_in_r(|r| Ok(BTreeMap::from([(0, Rational::from(1i64 << r.min(60)))])), 3, 1, 6);
        assert_eq!(res, Err(PixtonError::FitUnstable { budget: 6 }));
    }

    #[test]
    fn constant_term_stable_under_shift() {
        let a = AVector::new(vec![-2, 1, 1]).unwrap();
        let x = pixton_r_polynomial(1, 3, &a, 2).unwrap();
        // refit on shifted nodes
        let shifted = fit_in_r(
            |r| {
                let s = pixton_fixed_r(1, 3, &a, r as u64, 2)?;
                Ok(s.terms().iter().map(|(t, c)| (t.clone(), c.clone())).collect())
            },
            x.nodes[0] + 5,
            x.nodes.len(),
            x.nodes.len() + 4,
        )
        .unwrap();
        let mut y = StrataElement::zero(1, 3);
        for (t, c) in shifted.0 {
            y.add_term(t, c.first().cloned().unwrap_or_else(Rational::zero));
        }
        assert_eq!(y, x.constant_term());
    }
}
