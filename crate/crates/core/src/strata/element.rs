use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use super::{DecoratedGraph, Decoration, StrataError};
use crate::numerics::{Rational, SparsePoly};
use crate::stablegraphs::{canonical_form, StableGraph};

/// An element of `S_{g,n}`: a finite rational combination of decorated graphs
/// keyed by canonical form. No zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrataElement {
    g: u32,
    n: usize,
    terms: BTreeMap<DecoratedGraph, Rational>,
}

impl StrataElement {
    pub fn zero(g: u32, n: usize) -> Self {
        StrataElement { g, n, terms: BTreeMap::new() }
    }

    /// The fundamental class `[trivial graph, 1]`.
    pub fn unit(g: u32, n: usize) -> Self {
        Self::from_term(DecoratedGraph::plain(&StableGraph::trivial(g, n)), Rational::one())
    }

    pub fn from_term(term: DecoratedGraph, coeff: Rational) -> Self {
        let g = term.graph().genus();
        let n = term.graph().num_legs();
        let mut x = StrataElement::zero(g, n);
        x.add_term(term, coeff);
        x
    }

    /// `prod psi_i^{e_i}` on the trivial graph; zero if it exceeds the dimension.
    pub fn psi_monomial(g: u32, exponents: &[u32]) -> Self {
        let graph = StableGraph::trivial(g, exponents.len());
        let decoration = Decoration { kappa: vec![Vec::new()], psi: exponents.to_vec() };
        match DecoratedGraph::new(&graph, &decoration) {
            Some(t) => Self::from_term(t, Rational::one()),
            None => Self::zero(g, exponents.len()),
        }
    }

    /// The ambient `(g, n)`.
    pub fn ambient(&self) -> (u32, usize) {
        (self.g, self.n)
    }

    pub fn terms(&self) -> &BTreeMap<DecoratedGraph, Rational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, term: &DecoratedGraph) -> Rational {
        self.terms.get(term).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, term: DecoratedGraph, coeff: Rational) {
        debug_assert_eq!((term.graph().genus(), term.graph().num_legs()), (self.g, self.n));
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(term) {
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
        }
    }

    pub(crate) fn check_ambient(&self, other: &Self) -> Result<(), StrataError> {
        if (self.g, self.n) != (other.g, other.n) {
            return Err(StrataError::AmbientMismatch(self.g, self.n, other.g, other.n));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, StrataError> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, StrataError> {
        self.add(&other.scale(&Rational::from(-1)))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero(self.g, self.n);
        }
        StrataElement { g: self.g, n: self.n, terms: self.terms.iter().map(|(t, c)| (t.clone(), c * s)).collect() }
    }

    /// Terms satisfying `keep`.
    pub fn filter(&self, keep: impl Fn(&DecoratedGraph) -> bool) -> Self {
        StrataElement {
            g: self.g,
            n: self.n,
            terms: self.terms.iter().filter(|(t, _)| keep(t)).map(|(t, c)| (t.clone(), c.clone())).collect(),
        }
    }

    /// The sub-sum of terms with `#E + d(gamma) = d`.
    pub fn degree_component(&self, d: u32) -> Self {
        self.filter(|t| t.degree() == d)
    }

    /// True iff every term has an edge and no kappa decoration.
    pub fn is_kappa_free_boundary(&self) -> bool {
        self.terms.keys().all(|t| t.graph().num_edges() > 0 && !t.decoration().has_kappa())
    }

    pub fn has_kappa(&self) -> bool {
        self.terms.keys().any(|t| t.decoration().has_kappa())
    }

    /// Largest psi exponent on the leg with the given marking.
    pub fn psi_degree(&self, marking: usize) -> u32 {
        self.terms.keys().map(|t| t.leg_psi(marking)).max().unwrap_or(0)
    }

    /// Terms whose underlying graph is isomorphic to `graph`.
    pub fn component(&self, graph: &StableGraph) -> Self {
        let key = canonical_form(graph).key;
        self.filter(|t| canonical_form(t.graph()).key == key)
    }

    /// Terms supported on graphs with at least one edge.
    pub fn boundary_part(&self) -> Self {
        self.filter(|t| t.graph().num_edges() > 0)
    }

    /// The trivial-graph terms as a polynomial in `psi_1, ..., psi_n`.
    pub fn principal_part(&self) -> Result<SparsePoly, StrataError> {
        let mut poly = SparsePoly::zero(psi_names(self.n));
        for (t, c) in &self.terms {
            if t.graph().num_edges() > 0 {
                continue;
            }
            if t.decoration().has_kappa() {
                return Err(StrataError::KappaInPrincipalPart);
            }
            poly.add_term(t.decoration().psi.clone(), c.clone());
        }
        Ok(poly)
    }

    /// Inverse of [`StrataElement::principal_part`] for a psi polynomial.
    pub fn from_principal(g: u32, poly: &SparsePoly) -> Self {
        let mut x = Self::zero(g, poly.nvars());
        for (m, c) in poly.terms() {
            let t = Self::psi_monomial(g, m);
            for (term, _) in t.terms {
                x.add_term(term, c.clone());
            }
        }
        x
    }

    pub fn to_json_value(&self) -> Value {
        serde_json::to_value(self).expect("strata element serializes")
    }

    /// Parses the term-list schema produced by serialization.
    pub fn from_json_value(g: u32, n: usize, value: &Value) -> Result<Self, StrataError> {
        let bad = |m: &str| StrataError::Json(m.to_string());
        let list = value.as_array().ok_or_else(|| bad("expected a list of terms"))?;
        let mut x = Self::zero(g, n);
        for item in list {
            let graph: StableGraph =
                serde_json::from_value(item["graph"].clone()).map_err(|e| StrataError::Json(e.to_string()))?;
            if (graph.genus(), graph.num_legs()) != (g, n) {
                return Err(StrataError::AmbientMismatch(g, n, graph.genus(), graph.num_legs()));
            }
            let mut decoration = Decoration::trivial(&graph);
            for entry in item["kappa"].as_array().ok_or_else(|| bad("kappa"))? {
                let v = triple(entry).ok_or_else(|| bad("kappa entry"))?;
                if v[0] as usize >= graph.num_vertices() || v[1] == 0 {
                    return Err(bad("kappa entry out of range"));
                }
                super::kappa_mul(&mut decoration.kappa[v[0] as usize], v[1] as u32, v[2] as u32);
            }
            for entry in item["psi"].as_array().ok_or_else(|| bad("psi"))? {
                let pair: Vec<u64> = entry.as_array().into_iter().flatten().filter_map(Value::as_u64).collect();
                if pair.len() != 2 || pair[0] as usize >= graph.num_half_edges() {
                    return Err(bad("psi entry"));
                }
                decoration.psi[pair[0] as usize] += pair[1] as u32;
            }
            let coeff: Rational = item["coeff"]
                .as_str()
                .ok_or_else(|| bad("coeff"))?
                .parse()
                .map_err(|_| bad("coeff"))?;
            if let Some(t) = DecoratedGraph::new(&graph, &decoration) {
                x.add_term(t, coeff);
            }
        }
        Ok(x)
    }
}

fn triple(v: &Value) -> Option<[u64; 3]> {
    let a = v.as_array()?;
    if a.len() != 3 {
        return None;
    }
    Some([a[0].as_u64()?, a[1].as_u64()?, a[2].as_u64()?])
}

pub(crate) fn psi_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("psi{i}")).collect()
}

impl Serialize for StrataElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (t, c) in &self.terms {
            let d = t.decoration();
            let kappa: Vec<[u32; 3]> = d
                .kappa
                .iter()
                .enumerate()
                .flat_map(|(v, m)| m.iter().map(move |&(i, x)| [v as u32, i, x]))
                .collect();
            let psi: Vec<[u32; 2]> =
                d.psi.iter().enumerate().filter(|(_, &y)| y > 0).map(|(h, &y)| [h as u32, y]).collect();
            seq.serialize_element(&json!({
                "graph": t.graph(),
                "kappa": kappa,
                "psi": psi,
                "coeff": c,
            }))?;
        }
        seq.end()
    }
}

impl fmt::Display for StrataElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (t, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let d = t.decoration();
            write!(f, "({c})[V={:?} E={:?} L={:?}", t.graph().genera(), t.graph().edges(), t.graph().legs())?;
            if d.has_kappa() {
                write!(f, " kappa={:?}", d.kappa)?;
            }
            if d.psi.iter().any(|&y| y > 0) {
                write!(f, " psi={:?}", d.psi)?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}
