use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticEps<T> {
    /// `lim_{α→∞} ε_g`.
    pub plateau: T,
    /// Plateau plus the `α^{-1/2}` correction (equal to the plateau for `r ≥ 1`).
    pub two_term: T,
    /// `r = 1`, where the correction's coefficient is singular.
    pub singular: bool,
}

impl<T: Scalar> AsymptoticEps<T> {
    pub fn correction(&self) -> T {
        self.two_term - self.plateau
    }
}

/// Large-`α` generalization error as a function of the fake ratio `r`:
///
/// ```text
/// plateau = (1 − 2r√((1−r)/r))/r                        r ≤ 1,   1 otherwise
/// two_term = plateau + 2√2(r√((1−r)/r) + r − 1)/((r−1) r √α)   r < 1
/// ```
pub fn asymptotic_eps_g<T: Scalar>(r: T, alpha: T) -> Result<AsymptoticEps<T>> {
    if !(r > T::zero() && r.is_finite()) {
        return Err(Error::domain(format!("r = {r} must be positive")));
    }
    if !(alpha > T::zero()) {
        return Err(Error::domain(format!("alpha = {alpha} must be positive")));
    }
    let one = T::one();
    let two = T::lit(2.0);
    if r > one {
        return Ok(AsymptoticEps { plateau: one, two_term: one, singular: false });
    }
    let s = ((one - r) / r).sqrt();
    let plateau = (one - two * s * r) / r;
    if r == one {
        return Ok(AsymptoticEps { plateau, two_term: plateau, singular: true });
    }
    let coef = two * T::SQRT_2() * (s * r + r - one) / ((r - one) * r);
    Ok(AsymptoticEps { plateau, two_term: plateau + coef / alpha.sqrt(), singular: false })
}
