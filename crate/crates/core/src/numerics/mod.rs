//! Deterministic numerical primitives shared by the solvers.

mod extremize;
mod fixed_point;
mod newton;
mod quadrature;
pub(crate) mod special;

pub use extremize::{local_extrema, scalar_extremize, scalar_extremize_with, Extremum, Mode, DEFAULT_GRID};
pub use fixed_point::{damped_fixed_point, FixedPointConfig, FixedPointReport};
pub use newton::{newton_solve, solve_linear, NewtonConfig, NewtonReport};
pub use quadrature::{gauss_hermite, QuadratureRule, DEFAULT_ORDER};
pub use special::{binary_entropy, log_sum_exp, logit, sigmoid, softplus, LogFactorials};

use crate::Scalar;

/// L∞ norm of `a - b`.
pub(crate) fn max_abs_diff<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc.max((x - y).abs()))
}
