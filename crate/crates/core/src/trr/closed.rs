use crate::numerics::{binomial, double_factorial, elementary_symmetric_all, factorial, falling_factorial, Rational};

use super::{psi_vars, psi_vars_with_prime, PsiPoly, TrrError};

fn fact(m: i64) -> Rational {
    Rational::from(factorial(m).expect("nonnegative factorial argument"))
}

fn dfact(m: i64) -> Rational {
    Rational::from(double_factorial(m).expect("double factorial argument >= -1"))
}

fn binom(a: i64, b: i64) -> Rational {
    Rational::from(binomial(a, b))
}

fn pow2(e: u32) -> Rational {
    Rational::from(2).pow(e)
}

/// All vectors `c` with `0 <= c_j <= caps_j`.
fn boxes(caps: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &cap in caps {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=cap).map(move |x| {
                    let mut v = v.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

fn check_b(g: u32, n: usize, b: &[u32], max: u32) -> Result<u32, TrrError> {
    if g == 0 {
        return Err(TrrError::GenusZero);
    }
    if n == 0 || b.len() + 1 != n {
        return Err(TrrError::ExponentsLength { expected: n.saturating_sub(1), got: b.len() });
    }
    let d: u32 = b.iter().sum();
    if d > max {
        return Err(TrrError::DegreeTooLarge { d, max });
    }
    Ok(d)
}

/// Trivial-graph part of `Omega_{g,M}` on `(g, n+1)`, in `psi_1, ..., psi_{n+1}`.
pub fn gamma0_closed(g: u32, n: usize, b: &[u32]) -> Result<PsiPoly, TrrError> {
    let d = check_b(g, n, b, 2 * g + 2)? as i64;
    let (gi, ni) = (g as i64, n as i64);
    let pre = fact(4 * gi - 1 + ni - d) / fact(2 * gi - 2 + ni);
    let mut out = PsiPoly::zero(psi_vars(n + 1));
    let caps: Vec<u32> = b.iter().map(|x| x / 2).collect();
    for c in boxes(&caps) {
        let sc: u32 = c.iter().sum();
        if sc > g + 1 {
            continue;
        }
        let mut coeff = &pre * &dfact(2 * gi + 1 - 2 * sc as i64);
        for (&cj, &bj) in c.iter().zip(b) {
            coeff /= pow2(cj) * fact(cj as i64) * fact(bj as i64 - 2 * cj as i64);
        }
        let mut m = vec![g + 1 - sc];
        m.extend_from_slice(&c);
        m.push(0);
        out.add_term(m, coeff);
    }
    Ok(out)
}

/// The bracket of the rational-tail contribution at `c_i`.
pub fn gammai_bracket(g: u32, n: usize, i: usize, b: &[u32], ci: u32) -> Rational {
    let (gi, ni, ci) = (g as i64, n as i64, ci as i64);
    let bi = b[i - 2] as i64;
    let total: i64 = b.iter().map(|&x| x as i64).sum();
    let rest = total - bi;
    let mut s = -binom(4 * gi + ni - rest, 2 * gi - 2 * ci - rest);
    for d in 0..=(bi - 2 * ci - 2) {
        s += binom(4 * gi - 1 + ni - total, 2 * gi - 2 * ci - rest - d) * binom(bi + 1, d);
    }
    s
}

/// Contribution of the graph with points `i` and `n+1` on a rational tail,
/// in `psi_1, ..., psi_n, psi'` where `psi'` sits on the genus-`g` side of
/// the edge and `psi_i` does not occur.
pub fn gammai_closed(g: u32, n: usize, i: usize, b: &[u32]) -> Result<PsiPoly, TrrError> {
    if n < 2 || i < 2 || i > n {
        return Err(TrrError::MarkingOutOfRange { i, n });
    }
    let d = check_b(g, n, b, 2 * g + 1)? as i64;
    let gi = g as i64;
    let bi = b[i - 2];
    let pre = fact(2 * gi + 1 - d) / fact(bi as i64);
    let caps: Vec<u32> = b.iter().enumerate().map(|(j, &x)| if j + 2 == i { g } else { x / 2 }).collect();
    let mut out = PsiPoly::zero(psi_vars_with_prime(n));
    for c in boxes(&caps) {
        let sc: u32 = c.iter().sum();
        if sc > g {
            continue;
        }
        let ci = c[i - 2];
        let bracket = gammai_bracket(g, n, i, b, ci);
        if bracket.is_zero() {
            continue;
        }
        let k = (g - sc) as i64;
        let mut coeff = &pre * &dfact(2 * k - 1) * dfact(2 * ci as i64 + 1) * bracket;
        let mut m = vec![0u32; n + 1];
        m[0] = g - sc;
        m[n] = ci;
        for (j, (&cj, &bj)) in c.iter().zip(b).enumerate() {
            if j + 2 == i {
                continue;
            }
            coeff /= pow2(cj) * fact(cj as i64) * fact(bj as i64 - 2 * cj as i64);
            m[j + 1] = cj;
        }
        out.add_term(m, coeff);
    }
    Ok(out)
}

/// String equation on the trivial graph: forgets the last point, whose psi
/// exponent must be zero.
pub fn string_forget_last(p: &PsiPoly) -> Result<PsiPoly, TrrError> {
    let n = p.nvars() - 1;
    let mut out = PsiPoly::zero(psi_vars(n));
    for (m, c) in p.terms() {
        if m[n] != 0 {
            return Err(TrrError::Precondition("forgotten point carries a psi class".into()));
        }
        for j in 0..n {
            if m[j] > 0 {
                let mut e = m[..n].to_vec();
                e[j] -= 1;
                out.add_term(e, c.clone());
            }
        }
    }
    Ok(out)
}

/// Forgetting point `n+1` contracts the rational tail: `psi'` becomes `psi_i`.
pub fn gammai_pushforward(p: &PsiPoly, i: usize) -> PsiPoly {
    let n = p.nvars() - 1;
    let mut out = PsiPoly::zero(psi_vars(n));
    for (m, c) in p.terms() {
        let mut e = m[..n].to_vec();
        e[i - 1] += m[n];
        out.add_term(e, c.clone());
    }
    out
}

/// Principal part of `pi_*(Omega_{g,M})` on `(g, n)` from the closed forms.
pub fn relation_principal_closed(g: u32, n: usize, b: &[u32]) -> Result<PsiPoly, TrrError> {
    check_b(g, n, b, 2 * g + 1)?;
    let mut out = string_forget_last(&gamma0_closed(g, n, b)?)?;
    for i in 2..=n {
        out = out.add(&gammai_pushforward(&gammai_closed(g, n, i, b)?, i));
    }
    Ok(out)
}

fn check_l(g: u32, l: &[u32]) -> Result<u32, TrrError> {
    let sl: u32 = l.iter().sum();
    if sl > g {
        return Err(TrrError::Precondition(format!("sum of l = {sl} exceeds g = {g}")));
    }
    Ok(g - sl)
}

/// Coefficient of `psi_1^k prod psi_j^{l_j}` in the pushed-forward trivial
/// graph contribution for `M = prod a_j^{2 l_j + d_j}`.
pub fn c0_coeff(g: u32, n: usize, l: &[u32], dvec: &[u32]) -> Result<Rational, TrrError> {
    if l.len() + 1 != n || dvec.len() + 1 != n {
        return Err(TrrError::ExponentsLength { expected: n.saturating_sub(1), got: l.len().min(dvec.len()) });
    }
    let k = check_l(g, l)? as i64;
    let b: u32 = l.iter().zip(dvec).map(|(x, d)| 2 * x + d).sum();
    if b > 2 * g + 2 {
        return Err(TrrError::DegreeTooLarge { d: b, max: 2 * g + 2 });
    }
    let (gi, ni) = (g as i64, n as i64);
    let mut c = dfact(2 * k + 1) / pow2(l.iter().sum());
    for &x in l {
        c /= fact(x as i64);
    }
    Ok(c * fact(4 * gi - 1 + ni - b as i64) / fact(2 * gi - 2 + ni))
}

/// Coefficient of `psi_1^{k'} prod psi_j^{l'_j}` in the pushed-forward
/// rational-tail contribution at point `i`, up to sign (the contribution is
/// its negative).
pub fn ci_coeff(g: u32, n: usize, i: usize, l: &[u32], lprime: &[u32], dvec: &[u32]) -> Result<Rational, TrrError> {
    if n < 2 || i < 2 || i > n {
        return Err(TrrError::MarkingOutOfRange { i, n });
    }
    if l.len() + 1 != n || lprime.len() + 1 != n || dvec.len() + 1 != n {
        return Err(TrrError::ExponentsLength { expected: n - 1, got: l.len().min(lprime.len()).min(dvec.len()) });
    }
    check_l(g, l)?;
    let kp = check_l(g, lprime)? as i64;
    for j in 0..n - 1 {
        if j + 2 != i && lprime[j] > l[j] {
            return Err(TrrError::Precondition(format!("l'_{} > l_{}", j + 2, j + 2)));
        }
    }
    let b: Vec<i64> = l.iter().zip(dvec).map(|(&x, &d)| 2 * x as i64 + d as i64).collect();
    let total: i64 = b.iter().sum();
    let gi = g as i64;
    if total > 2 * gi + 1 {
        return Err(TrrError::DegreeTooLarge { d: total as u32, max: 2 * g + 1 });
    }
    let rest = total - b[i - 2];
    let lpi = lprime[i - 2] as i64;
    let mut c = dfact(2 * lpi + 1) * dfact(2 * kp - 1) * fact(2 * gi + 1 - total) / fact(b[i - 2]);
    for j in 0..n - 1 {
        if j + 2 == i {
            continue;
        }
        let lp = lprime[j] as i64;
        c /= pow2(lprime[j]) * fact(lp) * fact(b[j] - 2 * lp);
    }
    Ok(c * binom(4 * gi + n as i64 - rest, 2 * gi - rest - 2 * lpi))
}

/// Weight of the relation for `d` in the combination that cancels the
/// rational-tail terms: `prod (-2 l_j - 1)^{d_j} (2k+1)_{(sum d)}`.
pub fn weight(k: u32, l: &[u32], dvec: &[u32]) -> Rational {
    let s: u32 = dvec.iter().sum();
    let mut w = Rational::from(falling_factorial(2 * k as u64 + 1, s as u64));
    for (&x, &d) in l.iter().zip(dvec) {
        if d == 1 {
            w *= Rational::from(-2 * x as i64 - 1);
        }
    }
    w
}

fn check_k(g: u32, k: u32, l: &[u32]) -> Result<(), TrrError> {
    let sum = k as i64 + l.iter().map(|&x| x as i64).sum::<i64>();
    if sum != g as i64 {
        return Err(TrrError::InconsistentK { g, sum });
    }
    Ok(())
}

/// `D_l` through the elementary symmetric regrouping
/// `sum_s e_s(-2l_j - 1) (2k+1)_{(s)} / (2g+n+2k-1)_{(s)}`.
pub fn d_value(g: u32, k: u32, l: &[u32]) -> Result<Rational, TrrError> {
    check_k(g, k, l)?;
    let n = l.len() as u64 + 1;
    let vals: Vec<Rational> = l.iter().map(|&x| Rational::from(-2 * x as i64 - 1)).collect();
    let top = 2 * g as u64 + n + 2 * k as u64 - 1;
    Ok(elementary_symmetric_all(&vals)
        .into_iter()
        .enumerate()
        .map(|(s, e)| {
            let s = s as u64;
            e * Rational::new(falling_factorial(2 * k as u64 + 1, s), falling_factorial(top, s))
        })
        .sum())
}

/// `D_l` as the plain sum over `d in {0,1}^{n-1}`.
pub fn d_value_direct(g: u32, k: u32, l: &[u32]) -> Result<Rational, TrrError> {
    check_k(g, k, l)?;
    if l.len() >= 32 {
        return Err(TrrError::Precondition("too many points for the direct sum".into()));
    }
    let n = l.len() as u64 + 1;
    let top = 2 * g as u64 + n + 2 * k as u64 - 1;
    let mut total = Rational::zero();
    for mask in 0u64..(1 << l.len()) {
        let mut term = Rational::one();
        for (j, &x) in l.iter().enumerate() {
            if mask >> j & 1 == 1 {
                term *= Rational::from(-2 * x as i64 - 1);
            }
        }
        let s = mask.count_ones() as u64;
        total += term * Rational::new(falling_factorial(2 * k as u64 + 1, s), falling_factorial(top, s));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(p: &PsiPoly, m: &[u32]) -> Rational {
        p.coefficient(m)
    }

    #[test]
    fn gamma0_examples() {
        let p = gamma0_closed(1, 1, &[]).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(mono(&p, &[2, 0]), Rational::from(72));
        let p = gamma0_closed(1, 2, &[0]).unwrap();
        assert_eq!(mono(&p, &[2, 0, 0]), Rational::from(180));
        let p = gamma0_closed(1, 2, &[1]).unwrap();
        assert_eq!(mono(&p, &[2, 0, 0]), Rational::from(36));
        assert_eq!(p.len(), 1);
        assert!(gamma0_closed(1, 2, &[5]).is_err());
    }

    #[test]
    fn gammai_genus_seven() {
        let p = gammai_closed(7, 4, 4, &[9, 3, 1]).unwrap();
        assert_eq!(mono(&p, &[5, 0, 1, 0, 1]), Rational::new(-1, 128));
        assert!(p.terms().keys().all(|m| m[4] <= 1));
        for ci in 2..=7 {
            assert!(gammai_bracket(7, 4, 4, &[9, 3, 1], ci).is_zero());
        }
        assert_eq!(gammai_bracket(7, 4, 4, &[9, 3, 1], 1), Rational::from(-1));
    }

    #[test]
    fn c0_matches_gamma0_pushforward() {
        assert_eq!(c0_coeff(2, 2, &[1], &[0]).unwrap(), Rational::from(315));
        for (g, l, d) in [(2u32, vec![1u32], vec![0u32]), (3, vec![1, 1], vec![1, 0]), (4, vec![2, 1], vec![1, 1])] {
            let n = l.len() + 1;
            let b: Vec<u32> = l.iter().zip(&d).map(|(x, y)| 2 * x + y).collect();
            let pushed = string_forget_last(&gamma0_closed(g, n, &b).unwrap()).unwrap();
            let k = g - l.iter().sum::<u32>();
            let mut m = vec![k];
            m.extend(&l);
            assert_eq!(pushed.coefficient(&m), c0_coeff(g, n, &l, &d).unwrap());
        }
    }

    #[test]
    fn ci_matches_gammai_pushforward() {
        for (g, l, d) in [(2u32, vec![1u32], vec![0u32]), (2, vec![1], vec![1]), (3, vec![1, 1], vec![0, 1])] {
            let n = l.len() + 1;
            let b: Vec<u32> = l.iter().zip(&d).map(|(x, y)| 2 * x + y).collect();
            let k = g - l.iter().sum::<u32>();
            for i in 2..=n {
                let pushed = gammai_pushforward(&gammai_closed(g, n, i, &b).unwrap(), i);
                for (m, c) in pushed.terms() {
                    if m[0] > k {
                        continue;
                    }
                    let lp = &m[1..];
                    assert_eq!(c, &-ci_coeff(g, n, i, &l, lp, &d).unwrap(), "{g} {l:?} {d:?} {i} {m:?}");
                }
            }
        }
    }

    #[test]
    fn d_examples() {
        assert_eq!(d_value(2, 1, &[1]).unwrap(), Rational::new(-2, 7));
        assert_eq!(d_value(7, 3, &[2, 1, 1]).unwrap(), Rational::zero());
        assert_eq!(d_value(35, 22, &[11, 1, 1]).unwrap(), Rational::zero());
        assert_eq!(d_value(3, 1, &[1, 1]).unwrap(), Rational::new(-1, 5));
        assert!(d_value(3, 1, &[1]).is_err());
        for (g, k, l) in [(5u32, 2u32, vec![1u32, 2]), (9, 3, vec![1, 2, 3]), (7, 0, vec![3, 4])] {
            assert_eq!(d_value(g, k, &l).unwrap(), d_value_direct(g, k, &l).unwrap());
        }
    }

    #[test]
    fn weights() {
        assert_eq!(weight(1, &[1], &[0]), Rational::one());
        assert_eq!(weight(1, &[1], &[1]), Rational::from(-9));
        assert_eq!(weight(0, &[1, 1], &[1, 1]), Rational::zero());
    }
}
