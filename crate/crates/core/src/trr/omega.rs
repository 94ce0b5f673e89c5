use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::closed::{gamma0_closed, gammai_closed};
use super::{psi_poly_json, psi_vars_with_prime, MonomialSpec, PsiPoly, ScaleGuard, TrrError};
use crate::pixton::pixton_monomial_coeff;
use crate::stablegraphs::StableGraph;
use crate::strata::StrataElement;

/// Coefficient of `M a_{n+1} ... a_N` in the degree-`(g+1)` Pixton class on
/// `(g, N)`.
pub fn omega_pre(spec: &MonomialSpec, guard: &ScaleGuard) -> Result<StrataElement, TrrError> {
    guard.check(spec.g)?;
    let big_n = spec.big_n();
    let mut b = spec.b.clone();
    b.resize(big_n - 1, 1);
    Ok(pixton_monomial_coeff(spec.g, big_n, &b, spec.g + 1)?)
}

/// Multiplies by `psi_{n+2} ... psi_N` and forgets points `N, ..., n+2`.
pub fn omega_from_pre(spec: &MonomialSpec, pre: &StrataElement) -> Result<StrataElement, TrrError> {
    let big_n = spec.big_n();
    let psi: BTreeMap<usize, u32> = (spec.n + 2..=big_n).map(|m| (m, 1)).collect();
    let mut x = pre.multiply_by_psi(&psi)?;
    for m in (spec.n + 2..=big_n).rev() {
        let p = x.pushforward_forget(m)?;
        if p.kappa_generated {
            return Err(TrrError::KappaGenerated);
        }
        x = p.element;
    }
    Ok(x)
}

/// `Omega_{g,M}` on `(g, n+1)`.
pub fn omega(spec: &MonomialSpec, guard: &ScaleGuard) -> Result<StrataElement, TrrError> {
    omega_from_pre(spec, &omega_pre(spec, guard)?)
}

/// The graph on `(g, n+1)` with points `i` and `n+1` on a genus-0 tail.
pub fn rational_tail_graph(g: u32, n: usize, i: usize) -> StableGraph {
    let legs = (1..=n + 1).map(|j| usize::from(j == i || j == n + 1)).collect();
    StableGraph::new(vec![g, 0], legs, vec![(0, 1)]).expect("stable for g >= 1")
}

/// Trivial-graph part of an element of `(g, n+1)`, as a polynomial in
/// `psi_1, ..., psi_{n+1}`.
pub fn gamma0_component(x: &StrataElement) -> Result<PsiPoly, TrrError> {
    Ok(x.principal_part()?)
}

/// Component on the rational tail at point `i`, in `psi_1, ..., psi_n, psi'`.
/// With `n = 1, i = 1` this is the tail carrying both points.
pub fn gammai_component(x: &StrataElement, i: usize) -> Result<PsiPoly, TrrError> {
    let (g, n1) = x.ambient();
    let n = n1 - 1;
    let mut out = PsiPoly::zero(psi_vars_with_prime(n));
    for (t, c) in x.component(&rational_tail_graph(g, n, i)).terms() {
        let graph = t.graph();
        let psi = &t.decoration().psi;
        let (a, _) = graph.edges()[0];
        let top = usize::from(graph.vertex_genus(0) != g);
        let prime = if a == top { n1 } else { n1 + 1 };
        if psi[i - 1] > 0 || psi[n] > 0 || psi[2 * n1 + 1 - prime] > 0 || t.decoration().has_kappa() {
            return Err(TrrError::Mismatch("decoration on the genus-0 tail".into()));
        }
        let mut m = vec![0u32; n + 1];
        for j in 1..=n {
            if j != i {
                m[j - 1] = psi[j - 1];
            }
        }
        m[n] = psi[prime];
        out.add_term(m, c.clone());
    }
    Ok(out)
}

/// Computed and closed-form values of one graph contribution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub label: String,
    pub computed: PsiPoly,
    pub expected: PsiPoly,
}

impl Comparison {
    pub fn matches(&self) -> bool {
        self.computed == self.expected
    }

    pub fn to_json_value(&self) -> Value {
        let mut v = json!({"graph": self.label, "match": self.matches(), "value": psi_poly_json(&self.computed)});
        if !self.matches() {
            v["expected"] = psi_poly_json(&self.expected);
        }
        v
    }
}

/// Brute-force `Omega_{g,M}` checked against the closed forms and the
/// structural properties of a TRR.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub spec: MonomialSpec,
    pub comparisons: Vec<Comparison>,
    pub kappa_free: bool,
    pub last_psi_degree: u32,
    pub pushforward_boundary_ok: bool,
    pub terms: usize,
}

impl LemmaReport {
    pub fn all_pass(&self) -> bool {
        self.comparisons.iter().all(Comparison::matches)
            && self.kappa_free
            && self.last_psi_degree == 0
            && self.pushforward_boundary_ok
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "g": self.spec.g,
            "n": self.spec.n,
            "b": self.spec.b,
            "N": self.spec.big_n(),
            "comparisons": self.comparisons.iter().map(Comparison::to_json_value).collect::<Vec<_>>(),
            "kappa_free": self.kappa_free,
            "last_psi_degree": self.last_psi_degree,
            "pushforward_boundary_kappa_free": self.pushforward_boundary_ok,
            "terms": self.terms,
            "pass": self.all_pass(),
        })
    }
}

/// Runs the full pipeline and compares the trivial-graph and rational-tail
/// components with the closed forms. For `n = 1` the tail carrying both
/// points is expected to vanish.
pub fn verify_lemmas(spec: &MonomialSpec, guard: &ScaleGuard) -> Result<LemmaReport, TrrError> {
    let x = omega(spec, guard)?;
    lemma_report(spec, &x)
}

/// Checks an already computed `Omega_{g,M}`.
pub fn lemma_report(spec: &MonomialSpec, x: &StrataElement) -> Result<LemmaReport, TrrError> {
    let (g, n) = (spec.g, spec.n);
    let mut comparisons =
        vec![Comparison { label: "trivial".into(), computed: gamma0_component(x)?, expected: gamma0_closed(g, n, &spec.b)? }];
    if n == 1 {
        comparisons.push(Comparison {
            label: "tail 1,2".into(),
            computed: gammai_component(x, 1)?,
            expected: PsiPoly::zero(psi_vars_with_prime(1)),
        });
    }
    for i in 2..=n {
        comparisons.push(Comparison {
            label: format!("tail {i},{}", n + 1),
            computed: gammai_component(x, i)?,
            expected: gammai_closed(g, n, i, &spec.b)?,
        });
    }
    let pushed = x.pushforward_forget(n + 1)?;
    let pushforward_boundary_ok = !pushed.kappa_generated && pushed.element.boundary_part().is_kappa_free_boundary();
    Ok(LemmaReport {
        spec: spec.clone(),
        comparisons,
        kappa_free: !x.has_kappa(),
        last_psi_degree: x.psi_degree(n + 1),
        pushforward_boundary_ok,
        terms: x.len(),
    })
}
