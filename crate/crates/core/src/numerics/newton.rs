use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig<T> {
    pub tol: T,
    pub max_iter: usize,
    /// Relative step of the forward-difference Jacobian.
    pub fd_step: T,
}

impl<T: Scalar> Default for NewtonConfig<T> {
    fn default() -> Self {
        Self { tol: T::lit(1e-13), max_iter: 100, fd_step: T::lit(1e-7) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonReport<T> {
    pub solution: Vec<T>,
    /// L∞ norm of the residual at `solution`.
    pub residual: T,
    pub iterations: usize,
    pub converged: bool,
}

fn norm<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |a, &x| a.max(x.abs()))
}

/// Damped Newton iteration for `g(x) = 0` with a finite-difference Jacobian
/// and step-halving line search. `g` returns `None` outside its domain.
pub fn newton_solve<T, G>(mut g: G, x0: &[T], cfg: &NewtonConfig<T>) -> NewtonReport<T>
where
    T: Scalar,
    G: FnMut(&[T]) -> Option<Vec<T>>,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let valid = |r: &Option<Vec<T>>| r.as_ref().is_some_and(|v| v.iter().all(|c| c.is_finite()));
    let first = g(&x);
    if !valid(&first) {
        return NewtonReport { solution: x, residual: T::infinity(), iterations: 0, converged: false };
    }
    let mut r = first.unwrap();
    let mut rn = norm(&r);
    let mut it = 0;
    while it < cfg.max_iter && rn > cfg.tol {
        it += 1;
        let mut jac = vec![T::zero(); n * n];
        let mut ok = true;
        for j in 0..n {
            let h = cfg.fd_step * x[j].abs().max(T::one());
            let mut xp = x.clone();
            xp[j] = xp[j] + h;
            let rp = g(&xp);
            if !valid(&rp) {
                ok = false;
                break;
            }
            for (i, v) in rp.unwrap().into_iter().enumerate() {
                jac[i * n + j] = (v - r[i]) / h;
            }
        }
        if !ok {
            break;
        }
        let neg: Vec<T> = r.iter().map(|&v| -v).collect();
        let Ok(step) = solve_linear(&mut jac, &neg) else { break };
        let mut lambda = T::one();
        let mut accepted = false;
        for _ in 0..40 {
            let trial: Vec<T> = x.iter().zip(&step).map(|(&a, &s)| a + lambda * s).collect();
            let rt = g(&trial);
            if valid(&rt) {
                let rt = rt.unwrap();
                let tn = norm(&rt);
                if tn < rn {
                    x = trial;
                    r = rt;
                    rn = tn;
                    accepted = true;
                    break;
                }
            }
            lambda = lambda * T::lit(0.5);
        }
        if !accepted {
            break;
        }
    }
    NewtonReport { solution: x, residual: rn, iterations: it, converged: rn <= cfg.tol }
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting; `a` is a
/// row-major `n×n` matrix and is overwritten.
pub fn solve_linear<T: Scalar>(a: &mut [T], b: &[T]) -> Result<Vec<T>> {
    let n = b.len();
    if a.len() != n * n {
        return Err(Error::Dimension(format!("matrix of {} entries for {n} unknowns", a.len())));
    }
    let mut x = b.to_vec();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i * n + col].abs().partial_cmp(&a[j * n + col].abs()).unwrap())
            .unwrap();
        if a[piv * n + col] == T::zero() || !a[piv * n + col].is_finite() {
            return Err(Error::domain("singular linear system"));
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
            }
            x.swap(piv, col);
        }
        let d = a[col * n + col];
        for i in col + 1..n {
            let f = a[i * n + col] / d;
            for k in col..n {
                a[i * n + k] = a[i * n + k] - f * a[col * n + k];
            }
            x[i] = x[i] - f * x[col];
        }
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for k in i + 1..n {
            s = s - a[i * n + k] * x[k];
        }
        x[i] = s / a[i * n + i];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn linear_3x3() {
        let mut a = vec![0.0, 2.0, 1.0, 1.0, 1.0, 1.0, 2.0, 1.0, 3.0];
        let x = solve_linear(&mut a, &[5.0, 5.0, 12.0]).unwrap();
        for (got, want) in x.iter().zip([1.0, 1.0, 3.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
        let mut s = vec![1.0, 2.0, 2.0, 4.0];
        assert!(solve_linear(&mut s, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn circle_line_intersection() {
        let g = |x: &[f64]| Some(vec![x[0] * x[0] + x[1] * x[1] - 1.0, x[0] - x[1]]);
        let r = newton_solve(g, &[1.0, 0.2], &NewtonConfig::default());
        assert!(r.converged);
        assert_abs_diff_eq!(r.solution[0], 0.5f64.sqrt(), epsilon = 1e-10);
    }

    #[test]
    fn domain_outside_start() {
        let r = newton_solve(|_: &[f64]| None, &[0.0], &NewtonConfig::default());
        assert!(!r.converged);
    }
}
