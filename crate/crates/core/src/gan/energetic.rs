use std::sync::Arc;

use super::{GanParams, OrderParams};
use crate::numerics::{gauss_hermite, scalar_extremize, Extremum, Mode};
use crate::{Error, Result, Scalar};

/// Real-data term `Φ` or fake-data term `Φ̃`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiKind {
    Real,
    Fake,
}

type Potential<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Discriminator potentials for real (`φ`) and fake (`φ̃`) samples.
#[derive(Clone)]
pub struct PotentialPair<T> {
    pub phi: Potential<T>,
    pub phi_tilde: Potential<T>,
    quadratic: bool,
}

impl<T: Scalar> PotentialPair<T> {
    /// `φ(x) = φ̃(x) = x²/2`, the WGAN case with closed forms.
    pub fn quadratic() -> Self {
        let f: Potential<T> = Arc::new(|x: T| x * x * T::lit(0.5));
        Self { phi: f.clone(), phi_tilde: f, quadratic: true }
    }

    pub fn custom(phi: impl Fn(T) -> T + Send + Sync + 'static, phi_tilde: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self { phi: Arc::new(phi), phi_tilde: Arc::new(phi_tilde), quadratic: false }
    }

    pub fn is_quadratic(&self) -> bool {
        self.quadratic
    }
}

impl<T> std::fmt::Debug for PotentialPair<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PotentialPair").field("quadratic", &self.quadratic).finish()
    }
}

/// Closed form of the energetic term for quadratic potentials:
/// `−(m²ρ + ηq)/(2(1 − ηχ + ηΔ))` (real) and `(b² + η̃q)/(2(1 + η̃χ − η̃Δ))`
/// (fake).
pub fn energetic_phi_closed_form<T: Scalar>(kind: PhiKind, order: &OrderParams<T>, params: &GanParams<T>) -> T {
    let two = T::lit(2.0);
    match kind {
        PhiKind::Real => {
            let e = params.eta;
            -(order.m * order.m * params.rho + e * order.q) / (two * (T::one() - e * order.chi + e * order.delta))
        }
        PhiKind::Fake => {
            let e = params.eta_tilde;
            (order.b * order.b + e * order.q) / (two * (T::one() + e * order.chi - e * order.delta))
        }
    }
}

/// `E_a[ max_y( −y²/2 − max_x( −x²/2 ± pot(a + √(ηχ)·x + √(ηΔ)·y) ) ) ]`
/// with `a ~ N(0, m²ρ + ηq)` (real, `+φ`) or `a ~ N(0, b² + η̃q)` (fake,
/// `−φ̃`, `η̃` in place of `η`), by Gauss–Hermite quadrature and nested
/// global 1D maximization.
pub fn energetic_phi<T: Scalar>(
    kind: PhiKind,
    order: &OrderParams<T>,
    params: &GanParams<T>,
    pot: &PotentialPair<T>,
    quad_order: usize,
) -> Result<T> {
    params.validate()?;
    if quad_order < 11 {
        return Err(Error::domain(format!("quadrature order {quad_order} below 11")));
    }
    for (name, v) in [("q", order.q), ("chi", order.chi), ("delta", order.delta)] {
        if !(v >= T::zero() && v.is_finite()) {
            return Err(Error::domain(format!("{name} = {v} must be finite and >= 0")));
        }
    }
    let (var, noise, sign, f) = match kind {
        PhiKind::Real => (order.m * order.m * params.rho + params.eta * order.q, params.eta, T::one(), &pot.phi),
        PhiKind::Fake => (
            order.b * order.b + params.eta_tilde * order.q,
            params.eta_tilde,
            -T::one(),
            &pot.phi_tilde,
        ),
    };
    let sd = var.sqrt();
    let cx = (noise * order.chi).sqrt();
    let cy = (noise * order.delta).sqrt();
    let rule = gauss_hermite::<T>(quad_order)?;
    let half = T::lit(0.5);
    rule.try_expect(|z| {
        let a = sd * z;
        let inner = |y: T| -> Result<T> {
            let e = bounded_max(|x| -x * x * half + sign * f(a + cx * x + cy * y), a + cy * y)?;
            Ok(-y * y * half - e.value)
        };
        // the outer objective is fallible; errors are surfaced after the scan
        let mut failure = None;
        let outer = bounded_max(
            |y| match inner(y) {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    T::nan()
                }
            },
            a,
        );
        match (failure, outer) {
            (Some(e), _) => Err(e),
            (None, r) => r.map(|e| e.value),
        }
    })
}

/// Global maximum over the real line, searched on a bracket around `center`
/// that grows while the optimum sits at its edge.
fn bounded_max<T: Scalar, F: FnMut(T) -> T>(mut f: F, center: T) -> Result<Extremum<T>> {
    let mut half_width = T::lit(8.0) * (T::one() + center.abs());
    let tol = T::epsilon().sqrt() * T::lit(0.01);
    for _ in 0..3 {
        let (lo, hi) = (center - half_width, center + half_width);
        let e = scalar_extremize(&mut f, Mode::Max, (lo, hi), tol)?;
        let margin = half_width * T::lit(1e-3);
        if e.arg > lo + margin && e.arg < hi - margin {
            return Ok(e);
        }
        half_width = half_width * T::lit(8.0);
    }
    Err(Error::DivergentEnergetic(format!(
        "maximum escapes the search bracket (half-width {half_width}) around {center}"
    )))
}
