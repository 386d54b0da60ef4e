use super::{solve_wgan, Branch, GanParams, Init, SolverConfig, WganSolution};
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow<T> {
    pub alpha: T,
    pub r: T,
    pub solution: WganSolution<T>,
    /// The branch differs from the previous converged row.
    pub branch_switch: bool,
}

/// Learning curve over an increasing `α` grid at fixed `r`.
///
/// Each point is warm-started from the previous converged solution; a fresh
/// informative search is also made whenever the warm start lands on the
/// trivial branch, so the curve picks up the informative branch as soon as it
/// exists. Failed points are kept with `converged = false`.
pub fn learning_curve<T: Scalar>(
    params: &GanParams<T>,
    alpha_grid: &[T],
    r: T,
    config: &SolverConfig<T>,
) -> Result<Vec<CurveRow<T>>> {
    if alpha_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("alpha grid must be strictly increasing"));
    }
    let base = GanParams { r, ..*params };
    let mut rows = Vec::with_capacity(alpha_grid.len());
    let mut prev: Option<WganSolution<T>> = None;
    for &alpha in alpha_grid {
        let p = base.with_alpha(alpha);
        let warm = match prev {
            Some(s) => Some(solve_wgan(&p, config, Init::Warm(s.order, s.conj))?),
            None => None,
        };
        let sol = match warm {
            Some(w) if w.converged && w.branch == Branch::Informative => w,
            Some(w) if w.converged => {
                let inf = solve_wgan(&p, config, Init::Informative)?;
                if inf.converged { inf } else { w }
            }
            _ => solve_wgan(&p, config, Init::Auto)?,
        };
        let branch_switch = prev.is_some_and(|s| s.branch != sol.branch) && sol.converged;
        if sol.converged {
            prev = Some(sol);
        }
        rows.push(CurveRow { alpha, r, solution: sol, branch_switch });
    }
    Ok(rows)
}
