//! Topological recursion relations built from Pixton's relations: the
//! classes Omega, closed forms for their non-boundary contributions, the D
//! coefficient and its zero scan, principal-part assembly and the genus-7
//! exceptional case.

mod assemble;
mod closed;
mod g7;
mod omega;
mod scan;

pub use assemble::{assemble_full_trr, n1_gamma, n1_trr, principal_part};
pub use closed::{
    c0_coeff, ci_coeff, d_value, d_value_direct, gamma0_closed, gammai_bracket, gammai_closed, gammai_pushforward,
    relation_principal_closed, string_forget_last, weight,
};
pub use g7::{g7_patch, FamilyRow, G7Report};
pub use omega::{
    gamma0_component, gammai_component, lemma_report, omega, omega_from_pre, omega_pre, rational_tail_graph,
    verify_lemmas, Comparison, LemmaReport,
};
pub use scan::{scan_zeros, scan_zeros_filtered, ScanReport, ScanZero};

use serde_json::{json, Value};

use crate::numerics::{Rational, SparsePoly};
use crate::pixton::PixtonError;
use crate::stablegraphs::GraphError;
use crate::strata::{StrataElement, StrataError};

/// A polynomial in `psi_1, ..., psi_n`, sometimes with a trailing half-edge
/// variable `psi'`.
pub type PsiPoly = SparsePoly;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrrError {
    #[error("genus must be positive")]
    GenusZero,
    #[error("exponent list has {got} entries, expected {expected}")]
    ExponentsLength { expected: usize, got: usize },
    #[error("monomial degree {d} exceeds {max}")]
    DegreeTooLarge { d: u32, max: u32 },
    #[error("k + sum(l) = {sum}, expected g = {g}")]
    InconsistentK { g: u32, sum: i64 },
    #[error("marking {i} out of range 2..={n}")]
    MarkingOutOfRange { i: usize, n: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("D vanishes at g = {g}, k = {k}, l = {l:?}; this target needs the exceptional-case construction (see the g7 command)")]
    ZeroD { g: u32, k: u32, l: Vec<u32> },
    #[error("genus {g} exceeds the brute-force limit {limit}; pass --allow-large to override")]
    ScaleGuard { g: u32, limit: u32 },
    #[error("pushforward produced kappa classes")]
    KappaGenerated,
    #[error("verification failed: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Pixton(#[from] PixtonError),
    #[error(transparent)]
    Strata(#[from] StrataError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Limit on the genus for computations that run the full Pixton pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScaleGuard {
    pub max_genus: u32,
}

impl Default for ScaleGuard {
    fn default() -> Self {
        ScaleGuard { max_genus: 2 }
    }
}

impl ScaleGuard {
    pub fn unlimited() -> Self {
        ScaleGuard { max_genus: u32::MAX }
    }

    pub fn allows(&self, g: u32) -> bool {
        g <= self.max_genus
    }

    pub fn check(&self, g: u32) -> Result<(), TrrError> {
        if self.allows(g) {
            Ok(())
        } else {
            Err(TrrError::ScaleGuard { g, limit: self.max_genus })
        }
    }
}

/// The monomial `M = prod_{j=2}^n a_j^{b_j}` in genus `g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialSpec {
    pub g: u32,
    pub n: usize,
    pub b: Vec<u32>,
}

impl MonomialSpec {
    /// Requires `g >= 1`, `n >= 1`, `b.len() == n - 1` and `D <= 2g + 1`, so
    /// that at least one extra point is forgotten.
    pub fn new(g: u32, n: usize, b: Vec<u32>) -> Result<Self, TrrError> {
        if g == 0 {
            return Err(TrrError::GenusZero);
        }
        if n == 0 || b.len() + 1 != n {
            return Err(TrrError::ExponentsLength { expected: n.saturating_sub(1), got: b.len() });
        }
        let d: u32 = b.iter().sum();
        if d > 2 * g + 1 {
            return Err(TrrError::DegreeTooLarge { d, max: 2 * g + 1 });
        }
        Ok(MonomialSpec { g, n, b })
    }

    pub fn degree(&self) -> u32 {
        self.b.iter().sum()
    }

    /// `N = n + 2g + 2 - D`.
    pub fn big_n(&self) -> usize {
        self.n + 2 * self.g as usize + 2 - self.degree() as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    /// exponent vectors `b` of the monomials combined
    pub monomials: Vec<Vec<u32>>,
    pub weights: Vec<Rational>,
    pub d: Rational,
    /// factor divided out so the target has coefficient 1
    pub normalization: Rational,
    /// point relabelings applied to each relation, when not the identity
    pub relabelings: Option<Vec<String>>,
}

/// A TRR: `principal + boundary = 0` in the tautological ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrrRecord {
    pub g: u32,
    pub n: usize,
    pub principal: PsiPoly,
    pub boundary: Option<StrataElement>,
    pub provenance: Provenance,
}

pub fn psi_poly_json(p: &PsiPoly) -> Value {
    Value::Array(p.terms().iter().map(|(m, c)| json!({"exponents": m, "coeff": c.to_string()})).collect())
}

impl TrrRecord {
    pub fn to_json_value(&self) -> Value {
        let p = &self.provenance;
        let mut prov = json!({
            "monomials": p.monomials,
            "weights": p.weights.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "D": p.d.to_string(),
            "normalization": p.normalization.to_string(),
        });
        if let Some(r) = &p.relabelings {
            prov["relabelings"] = json!(r);
        }
        json!({
            "g": self.g,
            "n": self.n,
            "principal": psi_poly_json(&self.principal),
            "boundary": self.boundary.as_ref().map(|b| b.to_json_value()),
            "provenance": prov,
        })
    }
}

pub(crate) fn psi_vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("psi{i}")).collect()
}

/// `psi1, ..., psin, psi'`.
pub(crate) fn psi_vars_with_prime(n: usize) -> Vec<String> {
    let mut v = psi_vars(n);
    v.push("psi'".to_string());
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_spec_bounds() {
        let s = MonomialSpec::new(1, 2, vec![2]).unwrap();
        assert_eq!(s.big_n(), 4);
        assert_eq!(MonomialSpec::new(1, 1, vec![]).unwrap().big_n(), 5);
        assert!(MonomialSpec::new(1, 2, vec![4]).is_err());
        assert!(MonomialSpec::new(0, 2, vec![0]).is_err());
        assert!(MonomialSpec::new(1, 3, vec![0]).is_err());
    }

    #[test]
    fn guard() {
        assert!(ScaleGuard::default().check(2).is_ok());
        assert_eq!(ScaleGuard::default().check(3), Err(TrrError::ScaleGuard { g: 3, limit: 2 }));
        assert!(ScaleGuard::unlimited().allows(40));
    }
}
