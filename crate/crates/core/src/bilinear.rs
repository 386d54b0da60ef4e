//! Rank-1 bilinear games over binary hypercubes.
//!
//! With `x ∈ {0,1}^{d_x}`, `y ∈ {0,1}^{d_y}` and all-ones coupling matrices,
//! the value depends on the strategies only through the magnetizations
//! `m_x = xᵀ1/d_x`, `m_y = yᵀ1/d_y`:
//!
//! ```text
//! V/d_x = w_xx m_x²/2 + κ w_yy m_y²/2 + √κ w_xy m_x m_y + b_x m_x + κ b_y m_y,   κ = d_y/d_x
//! ```
//!
//! The exact free energy is a double sum over magnetization counts; its
//! large-`d` limit is the nested extremum
//! `min_{m_x} max_{m_y} [V/d_x − H(m_x)/β_min + κ H(m_y)/β_max]`.

use rayon::prelude::*;

use crate::numerics::special::lse_unchecked;
use crate::numerics::{binary_entropy, local_extrema, logit, scalar_extremize, sigmoid, LogFactorials, Mode};
use crate::two_temperature::TemperaturePair;
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilinearParams<T> {
    pub w_xx: T,
    pub w_yy: T,
    pub w_xy: T,
    pub b_x: T,
    pub b_y: T,
    /// `d_y / d_x`.
    pub kappa: T,
}

impl<T: Scalar> BilinearParams<T> {
    /// All couplings zero, `κ = 1`.
    pub fn zero() -> Self {
        Self {
            w_xx: T::zero(),
            w_yy: T::zero(),
            w_xy: T::zero(),
            b_x: T::zero(),
            b_y: T::zero(),
            kappa: T::one(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.w_xx, self.w_yy, self.w_xy, self.b_x, self.b_y, self.kappa];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("bilinear couplings must be finite"));
        }
        if !(self.kappa > T::zero()) {
            return Err(Error::domain(format!("kappa = {} must be positive", self.kappa)));
        }
        Ok(())
    }

    /// Energy density `V/d_x` at magnetizations `(m_x, m_y)`.
    pub fn energy(&self, mx: T, my: T) -> T {
        let half = T::lit(0.5);
        let k = self.kappa;
        self.w_xx * mx * mx * half
            + k * self.w_yy * my * my * half
            + k.sqrt() * self.w_xy * mx * my
            + self.b_x * mx
            + k * self.b_y * my
    }

    fn inner_energy(&self, mx: T, my: T) -> T {
        let k = self.kappa;
        k * self.w_yy * my * my * T::lit(0.5) + k.sqrt() * self.w_xy * mx * my + k * self.b_y * my
    }

    fn outer_energy(&self, mx: T) -> T {
        self.w_xx * mx * mx * T::lit(0.5) + self.b_x * mx
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BilinearSaddle<T> {
    pub m_x: T,
    pub m_y: T,
    pub m_hat_x: T,
    pub m_hat_y: T,
    pub free_energy: T,
    /// The inner maximum at the reported `m_x` is attained at more than one
    /// `m_y`; the lowest one is reported.
    pub inner_tie: bool,
}

/// Exact `f(β_min, β_max)` at finite `(d_x, d_y)`, summing over magnetization
/// counts with log-binomial multiplicities.
pub fn exact_bilinear_free_energy<T: Scalar>(
    params: &BilinearParams<T>,
    d_x: usize,
    d_y: usize,
    temps: &TemperaturePair<T>,
) -> Result<T> {
    params.validate()?;
    temps.validate()?;
    if d_x == 0 || d_y == 0 {
        return Err(Error::domain("dimensions must be positive"));
    }
    let target = params.kappa * T::from_usize_lossy(d_x);
    if (T::from_usize_lossy(d_y) - target).abs() > T::lit(0.5) {
        return Err(Error::domain(format!(
            "d_y = {d_y} inconsistent with kappa·d_x = {target}"
        )));
    }
    if (d_x as f64) * (d_y as f64) > 1e8 {
        return Err(Error::domain("d_x·d_y exceeds 1e8"));
    }
    let lf = LogFactorials::<T>::new(d_x.max(d_y));
    let (bmin, bmax) = (temps.beta_min, temps.beta_max);
    let dxf = T::from_usize_lossy(d_x);
    let dyf = T::from_usize_lossy(d_y);
    let half = T::lit(0.5);
    let cross = (dxf * dyf).sqrt() * params.w_xy;
    let y_part: Vec<T> = (0..=d_y)
        .map(|j| {
            let my = T::from_usize_lossy(j) / dyf;
            dyf * (params.w_yy * my * my * half + params.b_y * my)
        })
        .collect();
    let ln_cy: Vec<T> = (0..=d_y).map(|j| lf.ln_binomial(d_y, j)).collect();

    let outer: Vec<T> = (0..=d_x)
        .into_par_iter()
        .map(|k| {
            let mx = T::from_usize_lossy(k) / dxf;
            let x_part = dxf * (params.w_xx * mx * mx * half + params.b_x * mx);
            let terms: Vec<T> = (0..=d_y)
                .map(|j| {
                    let my = T::from_usize_lossy(j) / dyf;
                    ln_cy[j] + bmax * (x_part + y_part[j] + cross * mx * my)
                })
                .collect();
            let h_eff = lse_unchecked(&terms) / bmax;
            lf.ln_binomial(d_x, k) - bmin * h_eff
        })
        .collect();
    Ok(-lse_unchecked(&outer) / (bmin * dxf))
}

fn entropy<T: Scalar>(m: T) -> T {
    binary_entropy(m.max(T::zero()).min(T::one())).expect("clamped to [0, 1]")
}

struct Inner<T> {
    m_y: T,
    value: T,
}

fn inner_objective<T: Scalar>(p: &BilinearParams<T>, t: &TemperaturePair<T>, mx: T, my: T) -> T {
    p.inner_energy(mx, my) + p.kappa * entropy(my) / t.beta_max
}

fn tol<T: Scalar>() -> T {
    T::epsilon().sqrt() * T::lit(0.1)
}

fn inner_max<T: Scalar>(p: &BilinearParams<T>, t: &TemperaturePair<T>, mx: T) -> Result<Inner<T>> {
    let e = scalar_extremize(|my| inner_objective(p, t, mx, my), Mode::Max, (T::zero(), T::one()), tol())?;
    Ok(Inner { m_y: e.arg, value: e.value })
}

/// Newton on `u = β_max(w_yy σ(u) + c)` in logit space, accepted only if it
/// does not lower the inner objective.
fn polish_inner<T: Scalar>(p: &BilinearParams<T>, t: &TemperaturePair<T>, mx: T, start: Inner<T>) -> Inner<T> {
    let c = p.w_xy * mx / p.kappa.sqrt() + p.b_y;
    let g = |u: T| u - t.beta_max * (p.w_yy * sigmoid(u) + c);
    let Some(u) = logit_newton(start.m_y, g, |u| {
        let s = sigmoid(u);
        T::one() - t.beta_max * p.w_yy * s * (T::one() - s)
    }) else {
        return start;
    };
    let my = sigmoid(u);
    let value = inner_objective(p, t, mx, my);
    if value >= start.value - slack(start.value) {
        Inner { m_y: my, value }
    } else {
        start
    }
}

fn slack<T: Scalar>(v: T) -> T {
    T::epsilon() * T::lit(64.0) * (T::one() + v.abs())
}

/// Solves `g(u) = 0` by safeguarded Newton from `logit(m0)`; returns the root
/// only if the residual improved on the start.
fn logit_newton<T: Scalar>(m0: T, g: impl Fn(T) -> T, dg: impl Fn(T) -> T) -> Option<T> {
    let lim = T::lit(700.0);
    let tiny = T::min_positive_value();
    let mut u = logit(m0.max(tiny).min(T::one() - T::epsilon())).max(-lim).min(lim);
    let r0 = g(u).abs();
    let mut r = r0;
    for _ in 0..100 {
        let d = dg(u);
        if d == T::zero() || !d.is_finite() {
            break;
        }
        let mut step = r.copysign(g(u)) / d;
        let mut moved = false;
        for _ in 0..30 {
            let cand = u - step;
            let rc = g(cand).abs();
            if rc.is_finite() && rc < r {
                u = cand;
                r = rc;
                moved = true;
                break;
            }
            step = step * T::lit(0.5);
        }
        if !moved || r <= T::epsilon() * (T::one() + u.abs()) {
            break;
        }
    }
    (r < r0 || r0 == T::zero()).then_some(u)
}

/// Saddle point of the large-`d` free energy: outer global minimum over
/// `m_x ∈ [0,1]` of the full objective with the inner global maximum over
/// `m_y ∈ [0,1]` substituted, each found by grid scan plus Brent refinement
/// and then polished on the logit-space stationarity equations.
pub fn bilinear_saddle_free_energy<T: Scalar>(
    params: &BilinearParams<T>,
    temps: &TemperaturePair<T>,
) -> Result<BilinearSaddle<T>> {
    params.validate()?;
    temps.validate()?;
    let p = params;
    let t = temps;
    let outer_at = |mx: T, inner: &Inner<T>| p.outer_energy(mx) - entropy(mx) / t.beta_min + inner.value;
    let rough = |mx: T| {
        inner_max(p, t, mx)
            .map(|i| outer_at(mx, &i))
            .unwrap_or(T::nan())
    };
    let ex = scalar_extremize(rough, Mode::Min, (T::zero(), T::one()), tol())?;
    let mut mx = ex.arg;
    let mut inner = polish_inner(p, t, mx, inner_max(p, t, mx)?);
    let mut value = outer_at(mx, &inner);

    // outer polish: u = -β_min(w_xx σ(u) + b_x + √κ w_xy m_y*(σ(u)))
    let sk = p.kappa.sqrt();
    let inner_at = |m: T| -> Option<Inner<T>> { inner_max(p, t, m).ok().map(|i| polish_inner(p, t, m, i)) };
    let g = |u: T| {
        let m = sigmoid(u);
        match inner_at(m) {
            Some(i) => u + t.beta_min * (p.w_xx * m + p.b_x + sk * p.w_xy * i.m_y),
            None => T::nan(),
        }
    };
    let dg = |u: T| {
        let m = sigmoid(u);
        let s = m * (T::one() - m);
        let my = inner_at(m).map_or(T::nan(), |i| i.m_y);
        let sy = my * (T::one() - my);
        let dmy = sy * t.beta_max * (p.w_xy / sk) / (T::one() - sy * t.beta_max * p.w_yy);
        T::one() + t.beta_min * s * (p.w_xx + sk * p.w_xy * dmy)
    };
    if let Some(u) = logit_newton(mx, g, dg) {
        let cand = sigmoid(u);
        if let Some(ci) = inner_at(cand) {
            let cv = outer_at(cand, &ci);
            if cv <= value + slack(value) {
                mx = cand;
                inner = ci;
                value = cv;
            }
        }
    }

    // lowest m_y among (numerically) equal inner maxima
    let peaks = local_extrema(|my| inner_objective(p, t, mx, my), Mode::Max, (T::zero(), T::one()), tol(), 64)?;
    let best = peaks.iter().map(|e| e.value).fold(inner.value, T::max);
    let tied: Vec<_> = peaks
        .iter()
        .filter(|e| best - e.value <= slack(best) * T::lit(16.0))
        .collect();
    let mut inner_tie = false;
    if tied.len() > 1 {
        inner_tie = true;
        let low = tied[0];
        if low.arg < inner.m_y - tol::<T>() {
            inner = polish_inner(p, t, mx, Inner { m_y: low.arg, value: low.value });
        }
    }

    let my = inner.m_y;
    Ok(BilinearSaddle {
        m_x: mx,
        m_y: my,
        m_hat_x: -t.beta_min * (p.w_xx * mx + p.w_xy * sk * my + p.b_x),
        m_hat_y: t.beta_max * (p.w_yy * my + p.w_xy * mx / sk + p.b_y),
        free_energy: value,
        inner_tie,
    })
}

/// `min_{m_x} max_{m_y} V/d_x` over `[0,1]²` (the entropy-free limit), with
/// a `grid`-point scan and Brent refinement at both levels.
pub fn bilinear_zero_temperature_minmax<T: Scalar>(params: &BilinearParams<T>, grid: usize) -> Result<T> {
    params.validate()?;
    if grid < 3 {
        return Err(Error::domain("grid must have at least 3 points"));
    }
    let p = params;
    let unit = (T::zero(), T::one());
    let inner = |mx: T| {
        crate::numerics::scalar_extremize_with(|my| p.inner_energy(mx, my), Mode::Max, unit, tol(), grid)
            .map_or(T::nan(), |e| e.value)
    };
    let e = crate::numerics::scalar_extremize_with(|mx| p.outer_energy(mx) + inner(mx), Mode::Min, unit, tol(), grid)?;
    Ok(e.value)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceRow<T> {
    pub d_x: usize,
    pub d_y: usize,
    pub exact: T,
    pub saddle: T,
    pub gap: T,
}

/// Exact finite-size free energies against the saddle value for each `d_x`.
pub fn theorem1_equivalence_report<T: Scalar>(
    params: &BilinearParams<T>,
    d_list: &[usize],
    temps: &TemperaturePair<T>,
) -> Result<Vec<EquivalenceRow<T>>> {
    if d_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("d_list must be strictly increasing"));
    }
    let saddle = bilinear_saddle_free_energy(params, temps)?.free_energy;
    d_list
        .par_iter()
        .map(|&d_x| {
            let d_y = matched_dim(params.kappa, d_x);
            let exact = exact_bilinear_free_energy(params, d_x, d_y, temps)?;
            Ok(EquivalenceRow { d_x, d_y, exact, saddle, gap: (exact - saddle).abs() })
        })
        .collect()
}

/// `round(κ·d_x)`, at least 1.
pub fn matched_dim<T: Scalar>(kappa: T, d_x: usize) -> usize {
    (kappa * T::from_usize_lossy(d_x)).round().to_usize().unwrap_or(1).max(1)
}
