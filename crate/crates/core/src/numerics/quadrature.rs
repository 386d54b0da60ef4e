use crate::{Error, Result, Scalar};

pub const DEFAULT_ORDER: usize = 101;

/// Gauss–Hermite rule normalized for the standard normal measure.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Scalar> QuadratureRule<T> {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `E[f(z)]` for `z ~ N(0, 1)`.
    pub fn expect<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| w * f(z))
            .sum()
    }

    /// Fallible variant of [`expect`](Self::expect); stops at the first error.
    pub fn try_expect<F, E>(&self, mut f: F) -> std::result::Result<T, E>
    where
        F: FnMut(T) -> std::result::Result<T, E>,
    {
        let mut acc = T::zero();
        for (&z, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + w * f(z)?;
        }
        Ok(acc)
    }
}

/// Nodes and weights of the `order`-point Gauss–Hermite rule for `N(0, 1)`.
///
/// Roots of the physicists' polynomials are found by Newton iteration on the
/// orthonormal recurrence (always in `f64`), then rescaled: `z = √2·x`,
/// `w = w_H/√π`, with the weights renormalized to sum to one.
pub fn gauss_hermite<T: Scalar>(order: usize) -> Result<QuadratureRule<T>> {
    if order == 0 {
        return Err(Error::domain("quadrature order must be at least 1"));
    }
    let n = order;
    let nf = n as f64;
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let mut x = vec![0.0f64; n];
    let mut w = vec![0.0f64; n];
    let mut z = 0.0f64;
    for i in 0..n.div_ceil(2) {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-0.16667),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (pim4, 0.0f64);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    // normalizing by the computed total (≈ √π) absorbs the rounding of 1/√π
    let scale = w.iter().sum::<f64>().recip();
    let sqrt2 = std::f64::consts::SQRT_2;
    // ascending nodes
    let nodes = x.iter().rev().map(|&v| T::lit(sqrt2 * v)).collect();
    let weights = w.iter().rev().map(|&v| T::lit(v * scale)).collect();
    Ok(QuadratureRule { nodes, weights })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn order_one() {
        let r = gauss_hermite::<f64>(1).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert_abs_diff_eq!(r.weights[0], 1.0, epsilon = 1e-14);
        assert!(gauss_hermite::<f64>(0).is_err());
    }

    #[test]
    fn moments() {
        for order in [3, 4, 10, 51, DEFAULT_ORDER, 150] {
            let r = gauss_hermite::<f64>(order).unwrap();
            assert_abs_diff_eq!(r.weights.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(r.expect(|z| z), 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(r.expect(|z| z * z), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(r.expect(|z| z.powi(4)), 3.0, epsilon = 1e-10);
            for k in 0..order / 2 {
                assert_abs_diff_eq!(r.nodes[k], -r.nodes[order - 1 - k], epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn polynomial_exactness() {
        // degree 2n-1 = 9 for n = 5; E z^8 = 105
        let r = gauss_hermite::<f64>(5).unwrap();
        assert_abs_diff_eq!(r.expect(|z| z.powi(8)), 105.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.expect(|z| z.powi(9)), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn f32_rule() {
        let r = gauss_hermite::<f32>(21).unwrap();
        assert!((r.expect(|z| z * z) - 1.0).abs() < 1e-5);
    }
}
