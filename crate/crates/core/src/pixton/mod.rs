//! Pixton's double ramification relations: the weighted graph sum at fixed
//! `r`, its constant term in `r`, and coefficients in the `a`-variables.

mod coeff;
mod fixed_r;
mod weighting;

pub use coeff::{monomial_coeff_by_grid, pixton_monomial_coeff};
pub use fixed_r::{pixton_constant_term, pixton_fixed_r, pixton_r_polynomial, RPolynomialClass};
pub use weighting::{enumerate_weightings, Weighting};

use crate::stablegraphs::GraphError;
use crate::strata::StrataError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PixtonError {
    #[error("modulus r must be positive")]
    ZeroModulus,
    #[error("a-vector has {got} entries, expected {expected}")]
    AVectorLength { expected: usize, got: usize },
    #[error("a-vector sums to {0}, expected 0")]
    AVectorSum(i64),
    #[error("exponent list has {got} entries, expected {expected}")]
    ExponentsLength { expected: usize, got: usize },
    #[error("degree {d} exceeds the dimension {max}")]
    DegreeTooLarge { d: u32, max: u32 },
    #[error("fit in r did not stabilize within {budget} nodes")]
    FitUnstable { budget: usize },
    #[error("grid interpolation failed its held-out check; the degree bound is too small")]
    GridUnstable,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Strata(#[from] StrataError),
}

/// Integers `(a_1, ..., a_n)` summing to zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AVector(Vec<i64>);

impl AVector {
    pub fn new(values: Vec<i64>) -> Result<Self, PixtonError> {
        let s: i64 = values.iter().sum();
        if s != 0 {
            return Err(PixtonError::AVectorSum(s));
        }
        Ok(AVector(values))
    }

    /// `(a_1, a_2, ..., a_n)` with `a_1 = -(a_2 + ... + a_n)`.
    pub fn from_tail(tail: &[i64]) -> Self {
        let mut v = vec![-tail.iter().sum::<i64>()];
        v.extend_from_slice(tail);
        AVector(v)
    }

    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
