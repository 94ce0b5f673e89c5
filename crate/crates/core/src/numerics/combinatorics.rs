use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{NumericsError, Rational};

/// `m!` for `m >= 0`.
pub fn factorial(m: i64) -> Result<BigInt, NumericsError> {
    if m < 0 {
        return Err(NumericsError::NegativeFactorial(m));
    }
    Ok((2..=m).fold(BigInt::one(), |acc, k| acc * k))
}

/// `m!!`, with `(-1)!! = 0!! = 1`.
pub fn double_factorial(m: i64) -> Result<BigInt, NumericsError> {
    if m < -1 {
        return Err(NumericsError::DoubleFactorialDomain(m));
    }
    let mut acc = BigInt::one();
    let mut k = m;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    Ok(acc)
}

/// Binomial coefficient with the vanishing convention: `0` whenever `b < 0`,
/// or `0 <= a < b`. For negative `a` and `b >= 0` the usual generalized
/// binomial `a(a-1)...(a-b+1)/b!` is returned.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if b < 0 || (a >= 0 && b > a) {
        return BigInt::zero();
    }
    // symmetric reduction keeps the product short
    let b = if a >= 0 && b > a - b { a - b } else { b };
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..b {
        num *= a - j;
        den *= j + 1;
    }
    num / den
}

/// Falling factorial `a(a-1)...(a-b+1)`; zero when `b > a`.
pub fn falling_factorial(a: u64, b: u64) -> BigInt {
    if b > a {
        return BigInt::zero();
    }
    (0..b).fold(BigInt::one(), |acc, j| acc * (a - j))
}

/// Elementary symmetric polynomial `e_s(values)` by the `O(n s)` recurrence.
pub fn elementary_symmetric(values: &[Rational], s: usize) -> Result<Rational, NumericsError> {
    if s > values.len() {
        return Err(NumericsError::SymmetricIndex { s, len: values.len() });
    }
    Ok(elementary_symmetric_all(values).swap_remove(s))
}

/// All of `e_0, ..., e_n` at once.
pub fn elementary_symmetric_all(values: &[Rational]) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); values.len() + 1];
    e[0] = Rational::one();
    for (i, x) in values.iter().enumerate() {
        for s in (1..=i + 1).rev() {
            let term = &e[s - 1] * x;
            e[s] += term;
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(factorial(0).unwrap(), big(1));
        assert_eq!(factorial(4).unwrap(), big(24));
        assert_eq!(factorial(10).unwrap(), big(3_628_800));
        assert_eq!(factorial(-1), Err(NumericsError::NegativeFactorial(-1)));
    }

    #[test]
    fn double_factorial_examples() {
        assert_eq!(double_factorial(-1).unwrap(), big(1));
        assert_eq!(double_factorial(0).unwrap(), big(1));
        assert_eq!(double_factorial(5).unwrap(), big(15));
        assert_eq!(double_factorial(9).unwrap(), big(945));
        assert_eq!(double_factorial(8).unwrap(), big(384));
        assert!(double_factorial(-2).is_err());
    }

    fn pascal_oracle(a: i64, b: i64) -> BigInt {
        // row-by-row Pascal triangle for a >= 0
        let mut row = vec![big(1)];
        for _ in 0..a {
            let mut next = vec![big(1)];
            for w in row.windows(2) {
                next.push(&w[0] + &w[1]);
            }
            next.push(big(1));
            row = next;
        }
        if b < 0 || b > a {
            big(0)
        } else {
            row[b as usize].clone()
        }
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(20, 0), big(1));
        assert_eq!(binomial(18, -1), big(0));
        assert_eq!(binomial(31, 14), pascal_oracle(31, 14));
        assert_eq!(binomial(31, 14), big(265_182_525));
        assert_eq!(binomial(31, 15), big(300_540_195));
        assert_eq!(binomial(3, 5), big(0));
        assert_eq!(binomial(-1, 3), big(-1));
    }

    #[test]
    fn binomial_matches_pascal_triangle() {
        for a in 0..=40 {
            for b in -2..=42 {
                assert_eq!(binomial(a, b), pascal_oracle(a, b), "C({a},{b})");
            }
        }
    }

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(falling_factorial(5, 2), big(20));
        assert_eq!(falling_factorial(3, 5), big(0));
        assert_eq!(falling_factorial(7, 0), big(1));
    }

    #[test]
    fn elementary_symmetric_examples() {
        let r = |n: i64| Rational::from(n);
        assert_eq!(elementary_symmetric(&[r(-3)], 1).unwrap(), r(-3));
        assert_eq!(elementary_symmetric(&[r(1), r(2), r(3)], 2).unwrap(), r(11));
        assert_eq!(elementary_symmetric(&[r(4), r(5)], 0).unwrap(), r(1));
        assert_eq!(elementary_symmetric(&[], 0).unwrap(), r(1));
        assert!(elementary_symmetric(&[r(1)], 2).is_err());
    }
}
