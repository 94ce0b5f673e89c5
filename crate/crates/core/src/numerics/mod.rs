//! Exact arithmetic kernel: rationals, combinatorial functions, sparse
//! polynomials and exact interpolation. Nothing in this crate uses floating
//! point.

mod combinatorics;
mod interp;
mod poly;
mod rational;

pub use combinatorics::{
    binomial, double_factorial, elementary_symmetric, elementary_symmetric_all, factorial,
    falling_factorial,
};
pub use interp::{
    grid_values_to_coeffs, interpolate, interpolate_coeffs, tensor_grid_coefficient,
    tensor_grid_interpolate,
};
pub use poly::{total_degree, Monomial, SparsePoly};
pub use rational::{ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NumericsError {
    #[error("factorial of negative number {0}")]
    NegativeFactorial(i64),
    #[error("double factorial undefined for {0} (need m >= -1)")]
    DoubleFactorialDomain(i64),
    #[error("elementary symmetric index {s} out of range for {len} values")]
    SymmetricIndex { s: usize, len: usize },
    #[error("duplicate interpolation abscissa {0}")]
    DuplicateAbscissa(String),
}
