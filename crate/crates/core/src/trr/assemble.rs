use crate::numerics::{double_factorial, factorial, Rational};
use crate::strata::StrataElement;

use super::closed::{c0_coeff, d_value, relation_principal_closed, weight};
use super::omega::{gammai_component, omega};
use super::{psi_vars, MonomialSpec, Provenance, PsiPoly, ScaleGuard, TrrError, TrrRecord};

/// `(2g+1)!! (4g)! / (2g-1)!`, the coefficient of `psi_1^g` in
/// `pi_*(Omega_{g,1})`.
pub fn n1_gamma(g: u32) -> Rational {
    let g = g as i64;
    Rational::from(double_factorial(2 * g + 1).expect("positive") * factorial(4 * g).expect("positive"))
        / Rational::from(factorial(2 * g - 1).expect("g >= 1"))
}

fn target_monomial(k: u32, l: &[u32]) -> Vec<u32> {
    let mut m = vec![k];
    m.extend_from_slice(l);
    m
}

fn dvecs(len: usize) -> Vec<Vec<u32>> {
    (0u64..1 << len).map(|mask| (0..len).map(|j| (mask >> j & 1) as u32).collect()).collect()
}

/// Validates `(g, k, l)` for the main construction and returns `D_l`.
fn check_target(g: u32, k: u32, l: &[u32]) -> Result<Rational, TrrError> {
    if g == 0 {
        return Err(TrrError::GenusZero);
    }
    if k == 0 {
        return Err(TrrError::Precondition("k must be positive".into()));
    }
    if l.contains(&0) {
        return Err(TrrError::Precondition("every l_j must be positive".into()));
    }
    let d = d_value(g, k, l)?;
    if d.is_zero() {
        return Err(TrrError::ZeroD { g, k, l: l.to_vec() });
    }
    Ok(d)
}

/// The relations combined for target `(k, l)`: exponent vectors `2l + d` and
/// their weights, skipping vanishing weights.
fn combination(k: u32, l: &[u32]) -> Vec<(Vec<u32>, Rational)> {
    dvecs(l.len())
        .into_iter()
        .map(|d| {
            let b = l.iter().zip(&d).map(|(x, y)| 2 * x + y).collect();
            (b, weight(k, l, &d))
        })
        .filter(|(_, w)| !w.is_zero())
        .collect()
}

/// TRR for `psi_1^g` on `(g, 1)`. The boundary part is computed when the
/// guard admits the brute-force pipeline, which also checks that the tail
/// carrying both points contributes nothing.
pub fn n1_trr(g: u32, guard: Option<&ScaleGuard>) -> Result<TrrRecord, TrrError> {
    if g == 0 {
        return Err(TrrError::GenusZero);
    }
    let gamma = n1_gamma(g);
    let mut principal = PsiPoly::zero(psi_vars(1));
    principal.add_term(vec![g], Rational::one());
    let mut boundary = None;
    if let Some(guard) = guard.filter(|gd| gd.allows(g)) {
        let spec = MonomialSpec::new(g, 1, vec![])?;
        let x = omega(&spec, guard)?;
        if !gammai_component(&x, 1)?.is_zero() {
            return Err(TrrError::Mismatch("the tail carrying both points contributes".into()));
        }
        let pushed = x.pushforward_forget(2)?;
        if pushed.kappa_generated {
            return Err(TrrError::KappaGenerated);
        }
        let rel = pushed.element.scale(&gamma.recip());
        if rel.principal_part()? != principal {
            return Err(TrrError::Mismatch(format!("principal part of the n = 1 relation is not {gamma} psi1^{g}")));
        }
        let b = rel.boundary_part();
        if !b.is_kappa_free_boundary() {
            return Err(TrrError::Mismatch("boundary part carries kappa classes".into()));
        }
        boundary = Some(b);
    }
    Ok(TrrRecord {
        g,
        n: 1,
        principal,
        boundary,
        provenance: Provenance {
            monomials: vec![Vec::new()],
            weights: vec![Rational::one()],
            d: Rational::one(),
            normalization: gamma,
            relabelings: None,
        },
    })
}

/// Principal part of the TRR for `psi_1^k prod psi_j^{l_j}` plus terms with
/// a higher power of `psi_1`, from the closed forms. An empty `l` takes the
/// one-point route.
pub fn principal_part(g: u32, k: u32, l: &[u32]) -> Result<TrrRecord, TrrError> {
    if l.is_empty() {
        if k != g {
            return Err(TrrError::InconsistentK { g, sum: k as i64 });
        }
        return n1_trr(g, None);
    }
    let d = check_target(g, k, l)?;
    let n = l.len() + 1;
    let mut sum = PsiPoly::zero(psi_vars(n));
    let combo = combination(k, l);
    for (b, w) in &combo {
        sum = sum.add(&relation_principal_closed(g, n, b)?.scale(w));
    }
    let target = target_monomial(k, l);
    let normalization = c0_coeff(g, n, l, &vec![0; n - 1])? * &d;
    if sum.coefficient(&target) != normalization {
        return Err(TrrError::Mismatch(format!(
            "target coefficient {} differs from c0 * D = {normalization}",
            sum.coefficient(&target)
        )));
    }
    if let Some(m) = sum.terms().keys().find(|m| m[0] <= k && **m != target) {
        return Err(TrrError::Mismatch(format!("monomial {m:?} with low psi1 power survives")));
    }
    Ok(TrrRecord {
        g,
        n,
        principal: sum.scale(&normalization.recip()),
        boundary: None,
        provenance: Provenance {
            monomials: combo.iter().map(|(b, _)| b.clone()).collect(),
            weights: combo.into_iter().map(|(_, w)| w).collect(),
            d,
            normalization,
            relabelings: None,
        },
    })
}

/// The same TRR through the brute-force pipeline, with its boundary part.
pub fn assemble_full_trr(g: u32, k: u32, l: &[u32], guard: &ScaleGuard) -> Result<TrrRecord, TrrError> {
    if l.is_empty() {
        if k != g {
            return Err(TrrError::InconsistentK { g, sum: k as i64 });
        }
        guard.check(g)?;
        return n1_trr(g, Some(guard));
    }
    let closed = principal_part(g, k, l)?;
    guard.check(g)?;
    let n = l.len() + 1;
    let mut rel = StrataElement::zero(g, n);
    for (b, w) in closed.provenance.monomials.iter().zip(&closed.provenance.weights) {
        let spec = MonomialSpec::new(g, n, b.clone())?;
        let pushed = omega(&spec, guard)?.pushforward_forget(n + 1)?;
        if pushed.kappa_generated {
            return Err(TrrError::KappaGenerated);
        }
        rel = rel.add(&pushed.element.scale(w))?;
    }
    let rel = rel.scale(&closed.provenance.normalization.recip());
    if rel.principal_part()? != closed.principal {
        return Err(TrrError::Mismatch("brute-force principal part differs from the closed forms".into()));
    }
    let boundary = rel.boundary_part();
    if !boundary.is_kappa_free_boundary() {
        return Err(TrrError::Mismatch("boundary part carries kappa classes".into()));
    }
    Ok(TrrRecord { boundary: Some(boundary), ..closed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        assert_eq!(n1_gamma(1), Rational::from(72));
        assert_eq!(n1_gamma(2), Rational::from(100800));
    }

    #[test]
    fn genus_two_principal() {
        let r = principal_part(2, 1, &[1]).unwrap();
        assert_eq!(r.provenance.normalization, Rational::from(-90));
        assert_eq!(r.principal.coefficient(&[1, 1]), Rational::one());
        assert!(r.principal.terms().keys().all(|m| m[0] > 1 || m == &vec![1, 1]));
        assert_eq!(r.provenance.monomials, vec![vec![2], vec![3]]);
    }

    #[test]
    fn zero_d_is_rejected() {
        assert!(matches!(principal_part(7, 3, &[2, 1, 1]), Err(TrrError::ZeroD { .. })));
    }

    #[test]
    fn one_point_route() {
        let r = principal_part(3, 3, &[]).unwrap();
        assert_eq!(r.provenance.normalization, n1_gamma(3));
        assert!(r.boundary.is_none());
        let full = assemble_full_trr(1, 1, &[], &ScaleGuard::default()).unwrap();
        let b = full.boundary.unwrap();
        assert!(!b.is_zero() && b.is_kappa_free_boundary());
    }
}
