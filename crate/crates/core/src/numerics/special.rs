use crate::{Error, Result, Scalar};

/// `log Σ exp(v_i)`, shifted by the maximum so that no term overflows.
pub fn log_sum_exp<T: Scalar>(values: &[T]) -> Result<T> {
    if values.is_empty() {
        return Err(Error::domain("log_sum_exp of an empty list"));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::domain(format!("log_sum_exp input {v} is not finite")));
    }
    Ok(lse_unchecked(values))
}

/// Same as [`log_sum_exp`] for inputs already known to be finite and non-empty.
pub(crate) fn lse_unchecked<T: Scalar>(values: &[T]) -> T {
    let max = values.iter().copied().fold(T::neg_infinity(), T::max);
    let sum: T = values.iter().map(|&v| (v - max).exp()).sum();
    max + sum.ln()
}

/// `H(m) = -m ln m - (1-m) ln(1-m)`, with `H(0) = H(1) = 0` exactly.
pub fn binary_entropy<T: Scalar>(m: T) -> Result<T> {
    if !(m >= T::zero() && m <= T::one()) {
        return Err(Error::domain(format!("binary_entropy argument {m} outside [0, 1]")));
    }
    if m == T::zero() || m == T::one() {
        return Ok(T::zero());
    }
    Ok(-m * m.ln() - (T::one() - m) * (-m).ln_1p())
}

pub fn sigmoid<T: Scalar>(u: T) -> T {
    if u >= T::zero() {
        T::one() / (T::one() + (-u).exp())
    } else {
        let e = u.exp();
        e / (T::one() + e)
    }
}

/// `ln(1 + e^u)`.
pub fn softplus<T: Scalar>(u: T) -> T {
    u.max(T::zero()) + (-u.abs()).exp().ln_1p()
}

/// Inverse of [`sigmoid`] on the open unit interval.
pub fn logit<T: Scalar>(m: T) -> T {
    m.ln() - (-m).ln_1p()
}

/// Cumulative table of `ln k!` for exact log-binomial coefficients.
#[derive(Debug, Clone)]
pub struct LogFactorials<T> {
    table: Vec<T>,
}

impl<T: Scalar> LogFactorials<T> {
    pub fn new(n_max: usize) -> Self {
        let mut table = Vec::with_capacity(n_max + 1);
        // accumulate in f64 regardless of T to keep large tables accurate
        let mut acc = 0.0f64;
        table.push(T::zero());
        for k in 1..=n_max {
            acc += (k as f64).ln();
            table.push(T::lit(acc));
        }
        Self { table }
    }

    pub fn ln_factorial(&self, k: usize) -> T {
        self.table[k]
    }

    /// `ln C(n, k)`; panics if `n` exceeds the table size.
    pub fn ln_binomial(&self, n: usize, k: usize) -> T {
        debug_assert!(k <= n);
        self.table[n] - self.table[k] - self.table[n - k]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn lse_basics() {
        assert_abs_diff_eq!(log_sum_exp(&[0.0, 0.0]).unwrap(), 2f64.ln(), epsilon = 1e-15);
        assert_eq!(log_sum_exp(&[-3.25f64]).unwrap(), -3.25);
        let big = log_sum_exp(&[1000.0f64, 1000.0]).unwrap();
        assert_abs_diff_eq!(big, 1000.0 + 2f64.ln(), epsilon = 1e-12);
        assert!(log_sum_exp::<f64>(&[]).is_err());
        assert!(log_sum_exp(&[0.0, f64::NAN]).is_err());
    }

    #[test]
    fn entropy_values() {
        assert_abs_diff_eq!(binary_entropy(0.5f64).unwrap(), 2f64.ln(), epsilon = 1e-15);
        assert_eq!(binary_entropy(0.0f64).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0f64).unwrap(), 0.0);
        // -0.25 ln 0.25 - 0.75 ln 0.75
        assert_abs_diff_eq!(binary_entropy(0.25f64).unwrap(), 0.562_335_144_618_808_6, epsilon = 1e-14);
        assert!(binary_entropy(1.5f64).is_err());
        assert!(binary_entropy(-1e-9f64).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn sigmoid_softplus() {
        assert_eq!(sigmoid(0.0f64), 0.5);
        assert_abs_diff_eq!(softplus(0.0f64), 2f64.ln(), epsilon = 1e-15);
        for u in [1.0f64, 10.0, 100.0] {
            assert_abs_diff_eq!(sigmoid(u) + sigmoid(-u), 1.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(softplus(50.0f64), 50.0, epsilon = 1e-12);
        assert!(softplus(1e6f64).is_finite() && softplus(-1e6f64) >= 0.0);
        assert_abs_diff_eq!(logit(sigmoid(2.5f64)), 2.5, epsilon = 1e-12);
    }

    #[test]
    fn binomials() {
        let lf = LogFactorials::<f64>::new(60);
        assert_abs_diff_eq!(lf.ln_binomial(10, 3), 120f64.ln(), epsilon = 1e-12);
        assert_eq!(lf.ln_binomial(7, 0), 0.0);
        assert_abs_diff_eq!(lf.ln_binomial(60, 30), 118_264_581_564_861_424f64.ln(), epsilon = 1e-10);
    }

    #[test]
    fn works_in_f32() {
        assert!((binary_entropy(0.5f32).unwrap() - 2f32.ln()).abs() < 1e-6);
        assert!((log_sum_exp(&[1.0f32, 2.0]).unwrap() - 2.313_261_7).abs() < 1e-5);
    }
}
