//! Replica-symmetric solution of a linear GAN on spiked-covariance data.
//!
//! Real samples `x = w*·c/√d + √η·n`, fake samples `g = w·z/√d + √η̃·ñ`, a
//! linear discriminator `v` and quadratic potentials (the WGAN case). The
//! equilibrium is described by the order parameters `(q, χ, m, b)` and their
//! conjugates; [`solve_wgan`] finds it, [`generalization_error`] reads off
//! `ε_g = ‖w̄ − w*‖²/d`.

mod asymptotic;
mod curve;
mod energetic;
mod params;
mod wgan;

pub use asymptotic::{asymptotic_eps_g, AsymptoticEps};
pub use curve::{learning_curve, CurveRow};
pub use energetic::{energetic_phi, energetic_phi_closed_form, PhiKind, PotentialPair};
pub use params::{ConjugateParams, GanParams, OrderParams, RatioConvention};
pub use wgan::{
    classify, free_energy_gradient, generalization_error, generalization_error_fixed_point, solve_wgan,
    wgan_free_energy, wgan_update, Branch, Init, SolverConfig, WganSolution,
};
