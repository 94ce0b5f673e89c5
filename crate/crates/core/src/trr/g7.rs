use serde_json::{json, Value};

use crate::numerics::{factorial, Rational};

use super::assemble::principal_part;
use super::closed::{d_value, gammai_bracket, gammai_closed, gammai_pushforward, relation_principal_closed};
use super::{psi_vars, Provenance, PsiPoly, TrrError, TrrRecord};

const G: u32 = 7;
const N: usize = 4;
const B: [u32; 3] = [9, 3, 1];

/// One member of the `c_2` family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyRow {
    pub c2: u32,
    pub computed: Rational,
    pub expected: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct G7Report {
    pub family: Vec<FamilyRow>,
    /// computed / expected, constant across the family
    pub scalar: Rational,
    pub proportional: bool,
    pub tail_only: bool,
    pub c4_vanishing: bool,
    pub avoids_221: bool,
    pub d_211: Rational,
    pub d_221: Rational,
    pub records: Vec<TrrRecord>,
}

impl G7Report {
    pub fn all_pass(&self) -> bool {
        self.proportional && self.tail_only && self.c4_vanishing && self.avoids_221 && !self.d_221.is_zero()
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "monomial": B,
            "family": self.family.iter().map(|r| json!({
                "c2": r.c2,
                "computed": r.computed.to_string(),
                "expected": r.expected.to_string(),
            })).collect::<Vec<_>>(),
            "scalar": self.scalar.to_string(),
            "proportional": self.proportional,
            "tail_only": self.tail_only,
            "c4_vanishing": self.c4_vanishing,
            "avoids_psi1^2psi2^2psi3^2psi4": self.avoids_221,
            "D_211": self.d_211.to_string(),
            "D_221": self.d_221.to_string(),
            "records": self.records.iter().map(TrrRecord::to_json_value).collect::<Vec<_>>(),
            "pass": self.all_pass(),
        })
    }
}

fn fact(m: u32) -> Rational {
    Rational::from(factorial(m as i64).expect("nonnegative"))
}

/// Terms with positive powers of both `psi_3` and `psi_4`.
fn positive_tail(p: &PsiPoly) -> PsiPoly {
    let mut q = p.clone();
    q.retain(|m| m[2] > 0 && m[3] > 0);
    q
}

fn swap12(p: &PsiPoly) -> PsiPoly {
    let mut q = PsiPoly::zero(psi_vars(p.nvars()));
    for (m, c) in p.terms() {
        let mut e = m.clone();
        e.swap(0, 1);
        q.add_term(e, c.clone());
    }
    q
}

/// `-1/2 sum_{c2=0}^{4} psi_1^{5-c2} psi_2^{c2} psi_3 psi_4 / (c2! (4-c2)!)`.
fn expected_family() -> PsiPoly {
    let mut p = PsiPoly::zero(psi_vars(N));
    for c2 in 0..=4 {
        p.add_term(vec![5 - c2, c2, 1, 1], Rational::new(-1, 2) / (fact(c2) * fact(4 - c2)));
    }
    p
}

/// The exceptional case `g = 7`, `n = 4`, `k = 3`, `l = (2,1,1)`: builds TRRs
/// for `psi_1^3 psi_2^2 psi_3 psi_4` and `psi_1^2 psi_2^2 psi_3^2 psi_4` from the
/// relation for `M = a_2^9 a_3^3 a_4`.
pub fn g7_patch() -> Result<G7Report, TrrError> {
    let rel = relation_principal_closed(G, N, &B)?;
    let restricted = positive_tail(&rel);
    let tail_only = restricted == positive_tail(&gammai_pushforward(&gammai_closed(G, N, 4, &B)?, 4));
    let c4_vanishing = (2..=G).all(|c| gammai_bracket(G, N, 4, &B, c).is_zero());
    let expected = expected_family();
    let family: Vec<FamilyRow> = (0..=4)
        .map(|c2| {
            let m = [5 - c2, c2, 1, 1];
            FamilyRow { c2, computed: restricted.coefficient(&m), expected: expected.coefficient(&m) }
        })
        .collect();
    let scalar = &family[0].computed / &family[0].expected;
    let proportional = !scalar.is_zero() && restricted == expected.scale(&scalar);
    if !proportional {
        return Err(TrrError::Mismatch(format!(
            "the psi3 psi4 family is not proportional to the expected one: {restricted}"
        )));
    }
    let x = [3, 2, 1, 1];
    let y = [2, 3, 1, 1];
    let z = [2, 2, 2, 1];
    let avoids_221 = rel.coefficient(&z).is_zero();
    // the relation and its image under swapping points 1 and 2
    let q1 = rel.scale(&scalar.recip());
    let q2 = swap12(&q1);
    let (a, b) = (q1.coefficient(&x), q1.coefficient(&y));
    let det = &a * &a - &b * &b;
    if det.is_zero() {
        return Err(TrrError::Mismatch("the swapped pair is degenerate".into()));
    }
    let w1 = &a / &det;
    let w2 = -(&b / &det);
    let solved = q1.scale(&w1).add(&q2.scale(&w2));
    if !solved.coefficient(&x).is_one() || !solved.coefficient(&y).is_zero() {
        return Err(TrrError::Mismatch("solving for psi1^3 psi2^2 psi3 psi4 failed".into()));
    }
    let d_211 = d_value(G, 3, &[2, 1, 1])?;
    let record_x = TrrRecord {
        g: G,
        n: N,
        principal: solved,
        boundary: None,
        provenance: Provenance {
            monomials: vec![B.to_vec(), B.to_vec()],
            weights: vec![w1, w2],
            d: d_211,
            normalization: scalar.clone(),
            relabelings: Some(vec!["identity".into(), "swap 1 2".into()]),
        },
    };
    let record_z = principal_part(G, 2, &[2, 2, 1])?;
    Ok(G7Report {
        family,
        scalar,
        proportional,
        tail_only,
        c4_vanishing,
        avoids_221,
        d_211: record_x.provenance.d.clone(),
        d_221: record_z.provenance.d.clone(),
        records: vec![record_x, record_z],
    })
}
