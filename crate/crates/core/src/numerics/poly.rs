use std::collections::BTreeMap;
use std::fmt;

use super::Rational;

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

/// Sparse multivariate polynomial over the rationals with an optional cap on
/// total degree.
///
/// Terms whose coefficient is zero are never stored, and when `degree_cap` is
/// set no stored monomial exceeds it.
#[derive(Clone, PartialEq, Eq)]
pub struct SparsePoly {
    variables: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
    degree_cap: Option<u32>,
}

pub fn total_degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

impl SparsePoly {
    pub fn zero(variables: Vec<String>) -> Self {
        SparsePoly { variables, terms: BTreeMap::new(), degree_cap: None }
    }

    pub fn constant(variables: Vec<String>, c: Rational) -> Self {
        let mut p = SparsePoly::zero(variables);
        let m = vec![0; p.variables.len()];
        p.add_term(m, c);
        p
    }

    /// The polynomial consisting of the single variable `index`.
    pub fn variable(variables: Vec<String>, index: usize) -> Self {
        let mut m = vec![0; variables.len()];
        m[index] = 1;
        let mut p = SparsePoly::zero(variables);
        p.add_term(m, Rational::one());
        p
    }

    /// Univariate polynomial from coefficients in increasing degree.
    pub fn univariate(name: &str, coeffs: &[Rational]) -> Self {
        let mut p = SparsePoly::zero(vec![name.to_string()]);
        for (d, c) in coeffs.iter().enumerate() {
            p.add_term(vec![d as u32], c.clone());
        }
        p
    }

    pub fn with_degree_cap(mut self, cap: u32) -> Self {
        self.degree_cap = Some(cap);
        self.terms.retain(|m, _| total_degree(m) <= cap);
        self
    }

    pub fn degree_cap(&self) -> Option<u32> {
        self.degree_cap
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, Rational> {
        self.terms
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

    pub fn coefficient(&self, m: &[u32]) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Constant coefficient.
    pub fn constant_term(&self) -> Rational {
        self.coefficient(&vec![0; self.variables.len()])
    }

    /// Largest total degree of a stored term; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| total_degree(m)).max()
    }

    /// Adds `c * x^m`, honoring the degree cap and dropping zeros.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.len(), self.variables.len());
        if c.is_zero() {
            return;
        }
        if let Some(cap) = self.degree_cap {
            if total_degree(&m) > cap {
                return;
            }
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        assert_eq!(self.variables, other.variables, "variable mismatch");
        let mut out = self.clone();
        out.degree_cap = min_cap(self.degree_cap, other.degree_cap);
        if let Some(cap) = out.degree_cap {
            out.terms.retain(|m, _| total_degree(m) <= cap);
        }
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SparsePoly) -> SparsePoly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> SparsePoly {
        let mut out = SparsePoly::zero(self.variables.clone());
        out.degree_cap = self.degree_cap;
        if s.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        let cap = min_cap(self.degree_cap, other.degree_cap);
        self.mul_filtered(other, |m| cap.is_none_or(|c| total_degree(m) <= c))
            .with_cap_opt(cap)
    }

    /// Product keeping only the monomials accepted by `keep`.
    ///
    /// Used with divisibility filters: when only one coefficient of a large
    /// product is wanted, every monomial that does not divide the target can
    /// be dropped as soon as it appears.
    pub fn mul_filtered(&self, other: &SparsePoly, keep: impl Fn(&[u32]) -> bool) -> SparsePoly {
        assert_eq!(self.variables, other.variables, "variable mismatch");
        let mut out = SparsePoly::zero(self.variables.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                if keep(&m) {
                    out.add_term(m, ca * cb);
                }
            }
        }
        out
    }

    pub fn retain(&mut self, keep: impl Fn(&[u32]) -> bool) {
        self.terms.retain(|m, _| keep(m));
    }

    pub fn pow_filtered(&self, exp: u32, keep: impl Fn(&[u32]) -> bool + Copy) -> SparsePoly {
        let mut acc = SparsePoly::constant(self.variables.clone(), Rational::one());
        for _ in 0..exp {
            acc = acc.mul_filtered(self, keep);
        }
        acc
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.variables.len());
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&e, x)| acc * x.pow(e))
            })
            .sum()
    }

    /// Homogeneous component of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> SparsePoly {
        let mut out = self.clone();
        out.terms.retain(|m, _| total_degree(m) == d);
        out
    }

    fn with_cap_opt(mut self, cap: Option<u32>) -> Self {
        self.degree_cap = cap;
        self
    }
}

fn min_cap(a: Option<u32>, b: Option<u32>) -> Option<u32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (v, &e) in self.variables.iter().zip(m) {
                match e {
                    0 => {}
                    1 => write!(f, "*{v}")?,
                    _ => write!(f, "*{v}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn degree_cap_truncates_products() {
        let x = SparsePoly::variable(vars(&["x", "y"]), 0).with_degree_cap(2);
        let y = SparsePoly::variable(vars(&["x", "y"]), 1);
        let one = SparsePoly::constant(vars(&["x", "y"]), Rational::one());
        let s = x.add(&y).add(&one);
        let cube = s.mul(&s).mul(&s);
        assert_eq!(cube.degree_cap(), Some(2));
        assert!(cube.terms().keys().all(|m| total_degree(m) <= 2));
        // (1+x+y)^3 up to degree 2: 1 + 3x + 3y + 3x^2 + 6xy + 3y^2
        assert_eq!(cube.coefficient(&[1, 1]), Rational::from(6));
        assert_eq!(cube.coefficient(&[0, 2]), Rational::from(3));
        assert_eq!(cube.len(), 6);
    }

    #[test]
    fn zero_terms_are_dropped() {
        let x = SparsePoly::variable(vars(&["x"]), 0);
        let d = x.sub(&x);
        assert!(d.is_zero());
        assert_eq!(d.len(), 0);
    }

    #[test]
    fn filtered_product_keeps_divisors() {
        let v = vars(&["a", "b"]);
        let s = SparsePoly::variable(v.clone(), 0).add(&SparsePoly::variable(v, 1));
        // coefficient of a*b in (a+b)^4 restricted to divisors of a^2 b^2
        let p = s.pow_filtered(4, |m| m[0] <= 2 && m[1] <= 2);
        assert_eq!(p.coefficient(&[2, 2]), Rational::from(6));
        assert_eq!(p.coefficient(&[3, 1]), Rational::zero());
    }
}
