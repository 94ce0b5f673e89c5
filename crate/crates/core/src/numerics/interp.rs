use std::collections::BTreeSet;

use super::{NumericsError, Rational, SparsePoly};

/// Coefficients (increasing degree) of the unique polynomial of degree
/// `< nodes.len()` through the given points, by Newton divided differences.
pub fn interpolate_coeffs(nodes: &[(Rational, Rational)]) -> Result<Vec<Rational>, NumericsError> {
    let mut seen = BTreeSet::new();
    for (x, _) in nodes {
        if !seen.insert(x.clone()) {
            return Err(NumericsError::DuplicateAbscissa(x.to_string()));
        }
    }
    let n = nodes.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let xs: Vec<&Rational> = nodes.iter().map(|(x, _)| x).collect();
    let mut dd: Vec<Rational> = nodes.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = xs[i] - xs[i - level];
            dd[i] = num / den;
        }
    }
    // Horner on the Newton form: p = dd[n-1]; p = p*(x - x_i) + dd[i]
    let mut coeffs = vec![dd[n - 1].clone()];
    for i in (0..n - 1).rev() {
        let mut next = vec![Rational::zero(); coeffs.len() + 1];
        for (d, c) in coeffs.iter().enumerate() {
            next[d + 1] += c;
            next[d] -= c * xs[i];
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    while coeffs.last().is_some_and(Rational::is_zero) {
        coeffs.pop();
    }
    Ok(coeffs)
}

/// Exact univariate interpolation in the variable `x`.
pub fn interpolate(nodes: &[(Rational, Rational)]) -> Result<SparsePoly, NumericsError> {
    Ok(SparsePoly::univariate("x", &interpolate_coeffs(nodes)?))
}

/// Matrix turning values at `0, 1, ..., d` into monomial coefficients.
fn value_to_coeff_matrix(d: usize) -> Vec<Vec<Rational>> {
    // column j: coefficients of the Lagrange basis polynomial for node j
    let mut cols = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let nodes: Vec<(Rational, Rational)> = (0..=d)
            .map(|i| (Rational::from(i), if i == j { Rational::one() } else { Rational::zero() }))
            .collect();
        let mut c = interpolate_coeffs(&nodes).expect("distinct nodes");
        c.resize(d + 1, Rational::zero());
        cols.push(c);
    }
    // row-major: out[k][j] = coefficient of x^k in basis j
    (0..=d).map(|k| (0..=d).map(|j| cols[j][k].clone()).collect()).collect()
}

/// Recovers a multivariate polynomial from its values on the tensor grid
/// `{0..=d_0} x ... x {0..=d_{m-1}}` by iterated univariate interpolation.
///
/// `degrees[v]` must bound the degree of the polynomial in variable `v`.
pub fn tensor_grid_interpolate<E>(
    variables: Vec<String>,
    degrees: &[u32],
    mut evaluator: impl FnMut(&[i64]) -> Result<Rational, E>,
) -> Result<SparsePoly, E> {
    assert_eq!(variables.len(), degrees.len());
    let dims: Vec<usize> = degrees.iter().map(|&d| d as usize + 1).collect();
    let total: usize = dims.iter().product();
    let mut values = Vec::with_capacity(total);
    let mut point = vec![0i64; dims.len()];
    for idx in 0..total {
        let mut rem = idx;
        for v in (0..dims.len()).rev() {
            point[v] = (rem % dims[v]) as i64;
            rem /= dims[v];
        }
        values.push(evaluator(&point)?);
    }
    let values = grid_values_to_coeffs(values, &dims);
    let mut poly = SparsePoly::zero(variables);
    for (idx, c) in values.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut rem = idx;
        let mut m = vec![0u32; dims.len()];
        for v in (0..dims.len()).rev() {
            m[v] = (rem % dims[v]) as u32;
            rem /= dims[v];
        }
        poly.add_term(m, c);
    }
    Ok(poly)
}

/// In-place axis-by-axis transform of row-major grid values into the
/// coefficient array of the interpolating polynomial.
pub fn grid_values_to_coeffs(mut values: Vec<Rational>, dims: &[usize]) -> Vec<Rational> {
    let total: usize = dims.iter().product();
    assert_eq!(values.len(), total);
    let mut stride = 1;
    for v in (0..dims.len()).rev() {
        let d = dims[v];
        let mat = value_to_coeff_matrix(d - 1);
        let block = stride * d;
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let line: Vec<Rational> = (0..d).map(|i| values[outer + inner + i * stride].clone()).collect();
                for (k, row) in mat.iter().enumerate() {
                    let c: Rational = row.iter().zip(&line).map(|(a, b)| a * b).sum();
                    values[outer + inner + k * stride] = c;
                }
            }
        }
        stride = block;
    }
    values
}

/// Coefficient of `x^target` in the polynomial interpolating `evaluator` on
/// the tensor grid `{0..=d_v}`.
pub fn tensor_grid_coefficient<E>(
    evaluator: impl FnMut(&[i64]) -> Result<Rational, E>,
    per_variable_degrees: &[u32],
    target_exponents: &[u32],
) -> Result<Rational, E> {
    assert_eq!(per_variable_degrees.len(), target_exponents.len());
    let names = (0..per_variable_degrees.len()).map(|i| format!("x{i}")).collect();
    let poly = tensor_grid_interpolate(names, per_variable_degrees, evaluator)?;
    Ok(poly.coefficient(target_exponents))
}
