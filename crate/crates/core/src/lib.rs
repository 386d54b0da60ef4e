//! Equilibrium values of high-dimensional random min-max problems.
//!
//! The min-max value `min_x max_y V(x, y)` is read off a virtual
//! two-temperature Boltzmann system: the maximizer sits at inverse
//! temperature `beta_max`, the minimizer at `beta_min`, and the limits are
//! taken with `beta_max -> inf` first. This crate provides
//!
//! * [`two_temperature`]: exact finite-temperature values of small matrix
//!   games and the limit-order diagnostic,
//! * [`bilinear`]: the rank-1 bilinear game over binary hypercubes, both as an
//!   exact finite-size sum and as a magnetization saddle point,
//! * [`gan`]: the replica-symmetric solution of a linear GAN trained on
//!   spiked-covariance data (quadratic WGAN self-consistent equations,
//!   general energetic terms, asymptotics),
//! * [`simulator`]: a finite-dimensional gradient descent-ascent oracle for
//!   the same GAN.
//!
//! The numerical core is generic over the scalar type through [`Scalar`]
//! (implemented for `f32` and `f64`); the aliases below fix it to `f64`.

// `!(x > 0)` is used deliberately so that NaN falls on the rejecting side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bilinear;
pub mod error;
pub mod gan;
pub mod numerics;
pub mod scalar;
pub mod simulator;
pub mod two_temperature;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default working precision.
pub type Real = f64;
pub type TemperaturePair = two_temperature::TemperaturePair<Real>;
pub type DiscreteGame = two_temperature::DiscreteGame<Real>;
pub type BilinearParams = bilinear::BilinearParams<Real>;
pub type BilinearSaddle = bilinear::BilinearSaddle<Real>;
pub type GanParams = gan::GanParams<Real>;
pub type OrderParams = gan::OrderParams<Real>;
pub type ConjugateParams = gan::ConjugateParams<Real>;
pub type WganSolution = gan::WganSolution<Real>;
pub type QuadratureRule = numerics::QuadratureRule<Real>;
pub type FixedPointReport = numerics::FixedPointReport<Real>;

