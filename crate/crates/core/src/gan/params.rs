use crate::{Error, Result, Scalar};

/// How the fake-sample ratio `r` sets the fake sample complexity `α̃`.
///
/// Under `Doubled` (`α̃ = 2rα`) the optimal ratio is `r = 1/2` and the
/// no-learning transition sits at `r = 1`; under `Direct` (`α̃ = rα`) both
/// move up by a factor of two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RatioConvention {
    #[default]
    Doubled,
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GanParams<T> {
    /// Real sample complexity `n/d`.
    pub alpha: T,
    /// Fake-to-real ratio.
    pub r: T,
    pub eta: T,
    pub eta_tilde: T,
    /// Discriminator regularization.
    pub lambda: T,
    /// Generator regularization.
    pub lambda_tilde: T,
    /// `‖w*‖²/d`; fixed to 1.
    pub rho: T,
    pub convention: RatioConvention,
}

impl<T: Scalar> GanParams<T> {
    /// Unit noise strengths and regularizations.
    pub fn unit(alpha: T, r: T) -> Self {
        Self {
            alpha,
            r,
            eta: T::one(),
            eta_tilde: T::one(),
            lambda: T::one(),
            lambda_tilde: T::one(),
            rho: T::one(),
            convention: RatioConvention::Doubled,
        }
    }

    pub fn with_alpha(mut self, alpha: T) -> Self {
        self.alpha = alpha;
        self
    }

    /// Fake sample complexity `α̃`.
    pub fn alpha_tilde(&self) -> T {
        match self.convention {
            RatioConvention::Doubled => T::lit(2.0) * self.r * self.alpha,
            RatioConvention::Direct => self.r * self.alpha,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = [("alpha", self.alpha), ("r", self.r)];
        for (name, v) in nonneg {
            if !(v >= T::zero() && v.is_finite()) {
                return Err(Error::domain(format!("{name} = {v} must be finite and >= 0")));
            }
        }
        let pos = [
            ("eta", self.eta),
            ("eta_tilde", self.eta_tilde),
            ("lambda", self.lambda),
            ("lambda_tilde", self.lambda_tilde),
        ];
        for (name, v) in pos {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::domain(format!("{name} = {v} must be finite and > 0")));
            }
        }
        if self.rho != T::one() {
            return Err(Error::domain(format!("rho = {} but only rho = 1 is supported", self.rho)));
        }
        Ok(())
    }
}

/// Replica-symmetric order parameters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OrderParams<T> {
    /// Discriminator self-overlap `v·v/d`.
    pub q: T,
    /// Response at `β_max`.
    pub chi: T,
    /// Response at `β_min`; pinned to 0 by the quadratic solver.
    pub delta: T,
    /// Discriminator–signal overlap `v·w*/d`.
    pub m: T,
    /// Discriminator–generator overlap `v·w/d`.
    pub b: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConjugateParams<T> {
    pub q_hat: T,
    pub chi_hat: T,
    pub delta_hat: T,
    pub m_hat: T,
    pub b_hat: T,
}

impl<T: Scalar> ConjugateParams<T> {
    /// `D = b̂² + λ̃(q̂ + λ)`.
    pub fn denominator(&self, p: &GanParams<T>) -> T {
        self.b_hat * self.b_hat + p.lambda_tilde * (self.q_hat + p.lambda)
    }
}

impl<T: Scalar> OrderParams<T> {
    pub(crate) fn to_array(self) -> [T; 4] {
        [self.q, self.chi, self.m, self.b]
    }
    pub(crate) fn from_slice(v: &[T]) -> Self {
        Self { q: v[0], chi: v[1], delta: T::zero(), m: v[2], b: v[3] }
    }
}

impl<T: Scalar> ConjugateParams<T> {
    pub(crate) fn to_array(self) -> [T; 4] {
        [self.q_hat, self.chi_hat, self.m_hat, self.b_hat]
    }
    pub(crate) fn from_slice(v: &[T]) -> Self {
        Self { q_hat: v[0], chi_hat: v[1], delta_hat: T::zero(), m_hat: v[2], b_hat: v[3] }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conventions() {
        let p = GanParams::unit(3.0, 0.5);
        assert_eq!(p.alpha_tilde(), 3.0);
        let q = GanParams { convention: RatioConvention::Direct, ..p };
        assert_eq!(q.alpha_tilde(), 1.5);
    }

    #[test]
    fn validation() {
        assert!(GanParams::unit(0.0, 0.0).validate().is_ok());
        assert!(GanParams::unit(-1.0, 0.5).validate().is_err());
        assert!(GanParams::unit(1.0, -0.5).validate().is_err());
        assert!(GanParams { eta: 0.0, ..GanParams::unit(1.0, 0.5) }.validate().is_err());
        assert!(GanParams { rho: 2.0, ..GanParams::unit(1.0, 0.5) }.validate().is_err());
    }
}
