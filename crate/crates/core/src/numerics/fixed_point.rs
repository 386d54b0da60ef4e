use super::max_abs_diff;
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointConfig<T> {
    /// Initial mixing weight θ in `x ← (1-θ)x + θ·update(x)`.
    pub damping: T,
    pub tol: T,
    pub max_iter: usize,
    /// Iterations over which residual growth triggers a halving of θ.
    pub window: usize,
    pub min_damping: T,
}

impl<T: Scalar> Default for FixedPointConfig<T> {
    fn default() -> Self {
        Self {
            damping: T::lit(0.5),
            tol: T::lit(1e-10),
            max_iter: 10_000,
            window: 8,
            min_damping: T::lit(1.0 / 256.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointReport<T> {
    pub solution: Vec<T>,
    /// L∞ norm of `update(solution) - solution`.
    pub residual: T,
    pub iterations: usize,
    pub converged: bool,
    pub final_damping: T,
}

/// Damped Picard iteration with adaptive halving of the damping.
///
/// `update` returns `None` for points outside its domain; such trial steps
/// are rejected and retried with half the damping. A non-finite update
/// output aborts with [`Error::NonFinite`].
pub fn damped_fixed_point<T, F>(
    mut update: F,
    init: &[T],
    config: &FixedPointConfig<T>,
) -> Result<FixedPointReport<T>>
where
    T: Scalar,
    F: FnMut(&[T]) -> Option<Vec<T>>,
{
    let cfg = *config;
    if !(cfg.damping > T::zero() && cfg.damping <= T::one()) {
        return Err(Error::domain(format!("damping {} outside (0, 1]", cfg.damping)));
    }
    if !(cfg.tol > T::zero()) {
        return Err(Error::domain("tolerance must be positive"));
    }
    let floor = cfg.min_damping.min(cfg.damping);
    let mut theta = cfg.damping;
    let mut x = init.to_vec();
    let mut u = match update(&x) {
        Some(u) => checked(u, &x)?,
        None => return Err(Error::domain("initial state outside the update's domain")),
    };
    let mut res = max_abs_diff(&u, &x);
    let mut history = vec![res];
    let mut iterations = 1;
    let report = |x: Vec<T>, res: T, it: usize, theta: T, ok: bool| FixedPointReport {
        solution: x,
        residual: res,
        iterations: it,
        converged: ok,
        final_damping: theta,
    };

    while iterations < cfg.max_iter {
        if res <= cfg.tol {
            return Ok(report(x, res, iterations, theta, true));
        }
        let trial: Vec<T> = x.iter().zip(&u).map(|(&a, &b)| a + theta * (b - a)).collect();
        iterations += 1;
        match update(&trial) {
            None => {
                if theta <= floor {
                    break;
                }
                theta = (theta * T::lit(0.5)).max(floor);
                continue;
            }
            Some(next) => {
                u = checked(next, &trial)?;
                x = trial;
                res = max_abs_diff(&u, &x);
                history.push(res);
            }
        }
        let k = history.len();
        if k > cfg.window && history[k - 1] > history[k - 1 - cfg.window] {
            if theta <= floor {
                break;
            }
            theta = (theta * T::lit(0.5)).max(floor);
            history.clear();
            history.push(res);
        }
    }
    let ok = res <= cfg.tol;
    Ok(report(x, res, iterations, theta, ok))
}

fn checked<T: Scalar>(u: Vec<T>, at: &[T]) -> Result<Vec<T>> {
    if let Some(i) = u.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            at: at.get(i).map_or(f64::NAN, |v| v.to_f64_lossy()),
            context: format!("update component {i} non-finite at state {at:?}"),
        });
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> FixedPointConfig<f64> {
        FixedPointConfig { tol: 1e-12, max_iter: 5000, ..Default::default() }
    }

    #[test]
    fn contraction() {
        let r = damped_fixed_point(|x| Some(vec![x[0] / 2.0]), &[1.0], &cfg()).unwrap();
        assert!(r.converged);
        assert!(r.solution[0].abs() < 1e-11);
    }

    #[test]
    fn identity_is_immediate() {
        let v = [0.3, -2.0, 7.0];
        let r = damped_fixed_point(|x| Some(x.to_vec()), &v, &cfg()).unwrap();
        assert_eq!(r.solution, v.to_vec());
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.iterations, 1);
        assert!(r.converged);
    }

    #[test]
    fn expanding_map_fails_honestly() {
        let r = damped_fixed_point(|x| Some(vec![3.0 * x[0]]), &[1.0], &cfg()).unwrap();
        assert!(!r.converged);
        assert_eq!(r.final_damping, 1.0 / 256.0);
    }

    #[test]
    fn nan_aborts() {
        let r = damped_fixed_point(|_| Some(vec![f64::NAN]), &[1.0], &cfg());
        assert!(matches!(r, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn rejected_steps_shrink_damping() {
        // domain x < 1.5; undamped first step would leave it
        let upd = |x: &[f64]| if x[0] < 1.5 { Some(vec![0.5 * x[0] + 0.7]) } else { None };
        let c = FixedPointConfig { damping: 1.0, ..cfg() };
        let r = damped_fixed_point(upd, &[-10.0], &c).unwrap();
        assert!(r.converged);
        assert!((r.solution[0] - 1.4).abs() < 1e-10);
    }

    #[test]
    fn bad_config() {
        let c = FixedPointConfig { damping: 0.0, ..cfg() };
        assert!(damped_fixed_point(|x| Some(x.to_vec()), &[0.0], &c).is_err());
    }
}
