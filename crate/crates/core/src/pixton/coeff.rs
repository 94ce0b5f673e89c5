use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::fixed_r::{fit_in_r, pixton_constant_term};
use super::weighting::TreePlan;
use super::{AVector, PixtonError};
use crate::numerics::{binomial, factorial, grid_values_to_coeffs, Rational, SparsePoly};
use crate::stablegraphs::{automorphism_count, enumerate_cached, StableGraph};
use crate::strata::{DecoratedGraph, Decoration, StrataElement};

type MomentKey = (usize, Vec<(usize, usize)>, Vec<u32>);

/// Constant term in `r` of `r^{-h1} sum_w prod_e (w(h) w(h'))^{p_e}` at fixed
/// integer vertex charges.
fn moment_at(plan: &TreePlan, charges: &[i64], p: &[u32]) -> Result<Rational, PixtonError> {
    let sum_p: u32 = p.iter().sum();
    let r0 = charges.iter().map(|c| c.abs()).sum::<i64>() + 2 * sum_p as i64 + 3;
    let h1 = plan.num_free() as u32;
    let start = 2 * sum_p as usize + 1;
    let (fits, _) = fit_in_r(
        |r| {
            let mut total = BigInt::zero();
            plan.for_each(charges, r as u64, |w| {
                let mut prod = BigInt::one();
                for (&(x, y), &pe) in w.iter().zip(p) {
                    prod *= BigInt::from(x * y).pow(pe);
                }
                total += prod;
            });
            let v = Rational::from(total) / Rational::from(r).pow(h1);
            Ok(BTreeMap::from([((), v)]))
        },
        r0,
        start,
        start + 8,
    )?;
    Ok(fits.get(&()).and_then(|c| c.first().cloned()).unwrap_or_else(Rational::zero))
}

fn grid_points(degrees: &[u32]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &d in degrees {
        out = out
            .into_iter()
            .flat_map(|pt| {
                (0..=d as i64).map(move |x| {
                    let mut pt = pt.clone();
                    pt.push(x);
                    pt
                })
            })
            .collect();
    }
    out
}

fn charges_from(pt: &[i64]) -> Vec<i64> {
    let mut c = pt.to_vec();
    c.push(-pt.iter().sum::<i64>());
    c
}

fn charge_names(k: usize) -> Vec<String> {
    (0..k).map(|v| format!("A{v}")).collect()
}

/// The edge moment as a polynomial in the charges `A_0, ..., A_{V-2}`, with
/// `A_{V-1} = -sum`. Interpolated on a tensor grid and checked off-grid.
fn charge_polynomial(nv: usize, edges: &[(usize, usize)], p: &[u32]) -> Result<Arc<SparsePoly>, PixtonError> {
    static CACHE: OnceLock<Mutex<HashMap<MomentKey, Arc<SparsePoly>>>> = OnceLock::new();
    let key = (nv, edges.to_vec(), p.to_vec());
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache poisoned").get(&key) {
        return Ok(hit.clone());
    }
    let plan = TreePlan::new(nv, edges);
    let bound: u32 = 2 * edges.iter().zip(p).filter(|(&(a, b), _)| a != b).map(|(_, &pe)| pe).sum::<u32>();
    let degrees = vec![bound; nv - 1];
    let points = grid_points(&degrees);
    let values: Vec<Rational> = points
        .par_iter()
        .map(|pt| moment_at(&plan, &charges_from(pt), p))
        .collect::<Result<_, _>>()?;
    let dims: Vec<usize> = degrees.iter().map(|&d| d as usize + 1).collect();
    let coeffs = grid_values_to_coeffs(values, &dims);
    let mut poly = SparsePoly::zero(charge_names(nv - 1));
    for (pt, c) in points.iter().zip(coeffs) {
        poly.add_term(pt.iter().map(|&x| x as u32).collect(), c);
    }
    let off: Vec<i64> = (0..nv - 1).map(|v| bound as i64 + 1 + v as i64).collect();
    let direct = moment_at(&plan, &charges_from(&off), p)?;
    let at: Vec<Rational> = off.iter().map(|&x| Rational::from(x)).collect();
    if poly.eval(&at) != direct {
        return Err(PixtonError::GridUnstable);
    }
    let poly = Arc::new(poly);
    cache.lock().expect("cache poisoned").insert(key, poly.clone());
    Ok(poly)
}

/// Vectors of positive integers of length `len` with sum at most `max`.
fn positive_vectors(len: usize, max: u32) -> Vec<Vec<u32>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=max {
        for mut rest in positive_vectors(len - 1, max - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Nonnegative vectors with the given sum and per-entry caps.
fn capped_vectors(caps: &[u32], total: u32) -> Vec<Vec<u32>> {
    if caps.is_empty() {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=caps[0].min(total) {
        for mut rest in capped_vectors(&caps[1..], total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn a_names(n: usize) -> Vec<String> {
    (2..=n).map(|i| format!("a{i}")).collect()
}

fn divides(m: &[u32], t: &[u32]) -> bool {
    m.iter().zip(t).all(|(x, y)| x <= y)
}

fn check(g: u32, n: usize, b: &[u32], d: u32) -> Result<(), PixtonError> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(crate::stablegraphs::GraphError::UnstableType { g, n }.into());
    }
    if b.len() + 1 != n {
        return Err(PixtonError::ExponentsLength { expected: n - 1, got: b.len() });
    }
    let top = 3 * g + n as u32 - 3;
    if d > top {
        return Err(PixtonError::DegreeTooLarge { d, max: top });
    }
    Ok(())
}

/// Coefficient of `a_2^{b_2} ... a_n^{b_n}` in the degree-`d` part of
/// Pixton's class on `(g, n)`, with `a_1 = -(a_2 + ... + a_n)`.
///
/// Per graph, the weighting sum depends on `a` only through the vertex
/// charges, so it is interpolated once as a polynomial in the charges and
/// then substituted.
pub fn pixton_monomial_coeff(g: u32, n: usize, b: &[u32], d: u32) -> Result<StrataElement, PixtonError> {
    check(g, n, b, d)?;
    let graphs = enumerate_cached(g, n, Some(d as usize))?;
    let parts: Vec<StrataElement> =
        graphs.par_iter().map(|graph| graph_coeff(graph, g, n, b, d)).collect::<Result<_, _>>()?;
    let mut out = StrataElement::zero(g, n);
    for p in parts {
        out = out.add(&p)?;
    }
    Ok(out)
}

fn graph_coeff(graph: &StableGraph, g: u32, n: usize, b: &[u32], d: u32) -> Result<StrataElement, PixtonError> {
    let mut out = StrataElement::zero(g, n);
    let ne = graph.num_edges();
    let nv = graph.num_vertices();
    let vars = a_names(n);
    let m = vars.len();
    let keep_b = |x: &[u32]| divides(x, b);
    let mut a1 = SparsePoly::zero(vars.clone());
    for j in 0..m {
        let mut e = vec![0; m];
        e[j] = 1;
        a1.add_term(e, Rational::from(-1));
    }
    let mut forms = vec![SparsePoly::zero(vars.clone()); nv];
    for (i, &v) in graph.legs().iter().enumerate() {
        if i == 0 {
            forms[v] = forms[v].add(&a1);
        } else {
            let mut e = vec![0; m];
            e[i - 1] = 1;
            forms[v].add_term(e, Rational::one());
        }
    }
    let aut = Rational::from(automorphism_count(graph));
    let mut powers: Vec<Vec<SparsePoly>> = forms
        .iter()
        .map(|f| vec![SparsePoly::constant(vars.clone(), Rational::one()), f.clone()])
        .collect();
    let caps: Vec<u32> = std::iter::once(d).chain(b.iter().map(|&x| x / 2)).collect();
    for p in positive_vectors(ne, d) {
        let moment = charge_polynomial(nv, graph.edges(), &p)?;
        let mut q = SparsePoly::zero(vars.clone());
        for (mono, c) in moment.terms() {
            let mut term = SparsePoly::constant(vars.clone(), c.clone());
            for (v, &k) in mono.iter().enumerate() {
                while powers[v].len() <= k as usize {
                    let next = powers[v].last().expect("nonempty").mul_filtered(&forms[v], keep_b);
                    powers[v].push(next);
                }
                term = term.mul_filtered(&powers[v][k as usize], keep_b);
            }
            q = q.add(&term);
        }
        if q.is_zero() {
            continue;
        }
        let sum_p: u32 = p.iter().sum();
        let mut edge_factor = aut.recip();
        for &pe in &p {
            let sign = if pe % 2 == 1 { Rational::one() } else { Rational::from(-1) };
            let f = Rational::from(factorial(pe as i64).expect("nonnegative")) * Rational::from(2).pow(pe);
            edge_factor = edge_factor * sign / f;
        }
        for y in capped_vectors(&caps, d - sum_p) {
            let target: Vec<u32> = b.iter().zip(&y[1..]).map(|(&bi, &yi)| bi - 2 * yi).collect();
            let keep_t = |x: &[u32]| divides(x, &target);
            let lead = a1.pow_filtered(2 * y[0], keep_t);
            let coeff = lead.mul_filtered(&q, keep_t).coefficient(&target);
            if coeff.is_zero() {
                continue;
            }
            let mut scalar = &coeff * &edge_factor;
            for &yi in &y {
                let f = Rational::from(factorial(yi as i64).expect("nonnegative")) * Rational::from(2).pow(yi);
                scalar /= f;
            }
            add_decorations(&mut out, graph, &y, &p, &scalar);
        }
    }
    Ok(out)
}

/// Adds `scalar * prod psi_i^{y_i} prod_e (psi_h + psi_h')^{p_e - 1}` on `graph`.
fn add_decorations(out: &mut StrataElement, graph: &StableGraph, y: &[u32], p: &[u32], scalar: &Rational) {
    let n = graph.num_legs();
    let mut psi = vec![0; graph.num_half_edges()];
    psi[..n].copy_from_slice(y);
    let mut partial = vec![(psi, scalar.clone())];
    for (e, &pe) in p.iter().enumerate() {
        let mut next = Vec::new();
        for (psi, c) in &partial {
            for j in 0..pe {
                let mut psi = psi.clone();
                psi[n + 2 * e] = j;
                psi[n + 2 * e + 1] = pe - 1 - j;
                next.push((psi, c * &Rational::from(binomial(pe as i64 - 1, j as i64))));
            }
        }
        partial = next;
    }
    for (psi, c) in partial {
        let dec = Decoration { kappa: vec![Vec::new(); graph.num_vertices()], psi };
        if let Some(t) = DecoratedGraph::new(graph, &dec) {
            out.add_term(t, c);
        }
    }
}

/// The same coefficient by brute force: the full constant-term class on an
/// integer grid in `(a_2, ..., a_n)`, interpolated with degree `2d` per
/// variable and checked at an off-grid point.
pub fn monomial_coeff_by_grid(g: u32, n: usize, b: &[u32], d: u32) -> Result<StrataElement, PixtonError> {
    check(g, n, b, d)?;
    let m = n - 1;
    let degrees = vec![2 * d; m];
    let eval = |pt: &[i64]| -> Result<StrataElement, PixtonError> {
        let mut vals = pt.to_vec();
        vals.insert(0, -pt.iter().sum::<i64>());
        Ok(pixton_constant_term(g, n, &AVector::new(vals)?, d)?.degree_component(d))
    };
    let points = grid_points(&degrees);
    let samples: Vec<StrataElement> = points.par_iter().map(|pt| eval(pt)).collect::<Result<_, _>>()?;
    let mut by_term: BTreeMap<DecoratedGraph, Vec<Rational>> = BTreeMap::new();
    for (idx, s) in samples.iter().enumerate() {
        for (t, c) in s.terms() {
            by_term.entry(t.clone()).or_insert_with(|| vec![Rational::zero(); points.len()])[idx] = c.clone();
        }
    }
    let dims: Vec<usize> = degrees.iter().map(|&x| x as usize + 1).collect();
    let off: Vec<i64> = (0..m).map(|v| 2 * d as i64 + 1 + v as i64).collect();
    let off_value = eval(&off)?;
    let at: Vec<Rational> = off.iter().map(|&x| Rational::from(x)).collect();
    let mut out = StrataElement::zero(g, n);
    let mut fitted = StrataElement::zero(g, n);
    for (t, values) in by_term {
        let coeffs = grid_values_to_coeffs(values, &dims);
        let mut poly = SparsePoly::zero(a_names(n));
        for (pt, c) in points.iter().zip(coeffs) {
            poly.add_term(pt.iter().map(|&x| x as u32).collect(), c);
        }
        fitted.add_term(t.clone(), poly.eval(&at));
        out.add_term(t, poly.coefficient(b));
    }
    if fitted != off_value {
        return Err(PixtonError::GridUnstable);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stablegraphs::StableGraph;

    #[test]
    fn vector_helpers() {
        assert_eq!(positive_vectors(2, 3), vec![vec![1, 1], vec![1, 2], vec![2, 1]]);
        assert_eq!(positive_vectors(0, 2), vec![Vec::<u32>::new()]);
        assert_eq!(capped_vectors(&[1, 2], 2), vec![vec![0, 2], vec![1, 1]]);
    }

    #[test]
    fn tree_moment_is_minus_cut_squared() {
        // one edge between two vertices: w w' = c (r - c), constant term -c^2
        let poly = charge_polynomial(2, &[(0, 1)], &[1]).unwrap();
        let mut expected = SparsePoly::zero(charge_names(1));
        expected.add_term(vec![2], Rational::from(-1));
        assert_eq!(*poly, expected);
    }

    #[test]
    fn loop_moment() {
        // r^{-1} sum_w w (r - w) = (r^2 - 1) / 6
        let poly = charge_polynomial(1, &[(0, 0)], &[1]).unwrap();
        assert_eq!(poly.constant_term(), Rational::new(-1, 6));
    }

    #[test]
    fn genus_one_two_points_trivial_part() {
        let x = pixton_monomial_coeff(1, 2, &[2], 1).unwrap();
        let trivial = x.component(&StableGraph::trivial(1, 2));
        let half = Rational::new(1, 2);
        let expected = StrataElement::psi_monomial(1, &[1, 0])
            .add(&StrataElement::psi_monomial(1, &[0, 1]))
            .unwrap()
            .scale(&half);
        assert_eq!(trivial, expected);
    }

    #[test]
    fn zero_monomial_in_degree_zero_is_unit() {
        assert_eq!(pixton_monomial_coeff(1, 2, &[0], 0).unwrap(), StrataElement::unit(1, 2));
        assert_eq!(pixton_monomial_coeff(2, 1, &[], 0).unwrap(), StrataElement::unit(2, 1));
    }

    #[test]
    fn agrees_with_grid_route() {
        for (g, n, b, d) in [(1, 2, vec![2], 1), (1, 2, vec![0], 1), (0, 4, vec![1, 1, 0], 1), (1, 3, vec![2, 2], 2)] {
            let fast = pixton_monomial_coeff(g, n, &b, d).unwrap();
            let slow = monomial_coeff_by_grid(g, n, &b, d).unwrap();
            assert_eq!(fast, slow, "({g},{n},{b:?},{d})");
        }
    }
}
