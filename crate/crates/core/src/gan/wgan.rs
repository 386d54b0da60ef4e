//! Quadratic-WGAN saddle point: free energy, self-consistent map, solver.

use super::{ConjugateParams, GanParams, OrderParams};
use crate::numerics::{damped_fixed_point, max_abs_diff, newton_solve, FixedPointConfig, NewtonConfig};
use crate::{Error, Result, Scalar};

/// Overlaps below this magnitude count as zero when classifying branches.
const OVERLAP_ZERO: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `m ≠ 0`: the generator has picked up the signal direction.
    Informative,
    /// `m = b = 0`: nothing is learned, `ε_g = ρ`.
    Trivial,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Informative => "informative",
            Branch::Trivial => "trivial",
        }
    }
}

/// Branch of an order-parameter state, or `None` for the `m = 0, b ≠ 0`
/// states, which are neither.
pub fn classify<T: Scalar>(o: &OrderParams<T>) -> Option<Branch> {
    let z = T::lit(OVERLAP_ZERO);
    if o.m.abs() > z {
        Some(Branch::Informative)
    } else if o.m.abs() + o.b.abs() <= z {
        Some(Branch::Trivial)
    } else {
        None
    }
}

struct Terms<T> {
    /// `ηχ − 1`, present when real samples carry weight.
    real: Option<T>,
    /// `η̃χ + 1`, present when fake samples carry weight.
    fake: Option<T>,
}

fn terms<T: Scalar>(chi: T, p: &GanParams<T>) -> Result<Terms<T>> {
    let real = if p.alpha > T::zero() {
        let e = p.eta * chi - T::one();
        if !(e < T::zero()) {
            return Err(Error::domain(format!("eta·chi < 1 violated (eta·chi = {})", p.eta * chi)));
        }
        Some(e)
    } else {
        None
    };
    let fake = if p.alpha_tilde() > T::zero() {
        let e = p.eta_tilde * chi + T::one();
        if !(e > T::zero()) {
            return Err(Error::domain(format!(
                "eta_tilde·chi > -1 violated (eta_tilde·chi = {})",
                p.eta_tilde * chi
            )));
        }
        Some(e)
    } else {
        None
    };
    Ok(Terms { real, fake })
}

fn denominator<T: Scalar>(c: &ConjugateParams<T>, p: &GanParams<T>) -> Result<T> {
    let d = c.denominator(p);
    if d > T::zero() && d.is_finite() {
        Ok(d)
    } else {
        Err(Error::domain(format!("D = b_hat² + lambda_tilde·(q_hat + lambda) = {d} must be > 0")))
    }
}

/// Replica free energy of the quadratic WGAN:
///
/// ```text
/// 2f = qq̂ − χχ̂ − 2mm̂ − 2bb̂ + λ̃(m̂² + χ̂)/D − α(ηq + ρm²)/(ηχ − 1) − α̃(η̃q + b²)/(η̃χ + 1)
/// ```
pub fn wgan_free_energy<T: Scalar>(o: &OrderParams<T>, c: &ConjugateParams<T>, p: &GanParams<T>) -> Result<T> {
    p.validate()?;
    let t = terms(o.chi, p)?;
    let d = denominator(c, p)?;
    let two = T::lit(2.0);
    let mut f = o.q * c.q_hat - o.chi * c.chi_hat - two * o.m * c.m_hat - two * o.b * c.b_hat
        + p.lambda_tilde * (c.m_hat * c.m_hat + c.chi_hat) / d;
    if let Some(e) = t.real {
        f = f - p.alpha * (p.eta * o.q + p.rho * o.m * o.m) / e;
    }
    if let Some(e) = t.fake {
        f = f - p.alpha_tilde() * (p.eta_tilde * o.q + o.b * o.b) / e;
    }
    Ok(f / two)
}

/// One sweep of the self-consistent equations (stationarity of
/// [`wgan_free_energy`]): new order parameters from the conjugates and new
/// conjugates from the order parameters.
pub fn wgan_update<T: Scalar>(
    o: &OrderParams<T>,
    c: &ConjugateParams<T>,
    p: &GanParams<T>,
) -> Result<(OrderParams<T>, ConjugateParams<T>)> {
    p.validate()?;
    Ok((orders_from(c, p)?, conjugates_from(o, p)?))
}

fn orders_from<T: Scalar>(c: &ConjugateParams<T>, p: &GanParams<T>) -> Result<OrderParams<T>> {
    let d = denominator(c, p)?;
    let lt = p.lambda_tilde;
    let s = c.m_hat * c.m_hat + c.chi_hat;
    Ok(OrderParams {
        q: lt * lt * s / (d * d),
        chi: lt / d,
        delta: T::zero(),
        m: c.m_hat * lt / d,
        b: -c.b_hat * lt * s / (d * d),
    })
}

fn conjugates_from<T: Scalar>(o: &OrderParams<T>, p: &GanParams<T>) -> Result<ConjugateParams<T>> {
    let t = terms(o.chi, p)?;
    let mut c = ConjugateParams::default();
    if let Some(e) = t.real {
        let a = p.alpha;
        c.q_hat = a * p.eta / e;
        c.chi_hat = a * p.eta * (p.eta * o.q + p.rho * o.m * o.m) / (e * e);
        c.m_hat = -a * p.rho * o.m / e;
    }
    if let Some(e) = t.fake {
        let a = p.alpha_tilde();
        c.q_hat = c.q_hat + a * p.eta_tilde / e;
        c.chi_hat = c.chi_hat + a * p.eta_tilde * (p.eta_tilde * o.q + o.b * o.b) / (e * e);
        c.b_hat = -a * o.b / e;
    }
    Ok(c)
}

/// `ε_g = ρ − 2M_w + Q_w` with `M_w = −b̂m̂/D`, `Q_w = b̂²(m̂² + χ̂)/D²`,
/// from the single-site generator minimizer `w̄ = −b̂(√χ̂ z + m̂ w*)/D`.
pub fn generalization_error<T: Scalar>(o: &OrderParams<T>, c: &ConjugateParams<T>, p: &GanParams<T>) -> Result<T> {
    let _ = o;
    let d = denominator(c, p)?;
    let mw = -c.b_hat * c.m_hat / d;
    let qw = c.b_hat * c.b_hat * (c.m_hat * c.m_hat + c.chi_hat) / (d * d);
    Ok(p.rho - T::lit(2.0) * mw + qw)
}

/// `ε_g = ρ + (b̂/λ̃)(2m − b)`; equal to [`generalization_error`] at a fixed point.
pub fn generalization_error_fixed_point<T: Scalar>(o: &OrderParams<T>, c: &ConjugateParams<T>, p: &GanParams<T>) -> T {
    p.rho + c.b_hat / p.lambda_tilde * (T::lit(2.0) * o.m - o.b)
}

/// Central-difference gradient of [`wgan_free_energy`] in
/// `(q, χ, m, b, q̂, χ̂, m̂, b̂)`, with step `h·max(1, |x_i|)`.
pub fn free_energy_gradient<T: Scalar>(
    o: &OrderParams<T>,
    c: &ConjugateParams<T>,
    p: &GanParams<T>,
    h: T,
) -> Result<[T; 8]> {
    let x = pack(o, c);
    let mut g = [T::zero(); 8];
    for i in 0..8 {
        let step = h * x[i].abs().max(T::one());
        let mut xp = x;
        let mut xm = x;
        xp[i] = xp[i] + step;
        xm[i] = xm[i] - step;
        let (op, cp) = unpack(&xp);
        let (om, cm) = unpack(&xm);
        g[i] = (wgan_free_energy(&op, &cp, p)? - wgan_free_energy(&om, &cm, p)?) / (T::lit(2.0) * step);
    }
    Ok(g)
}

fn pack<T: Scalar>(o: &OrderParams<T>, c: &ConjugateParams<T>) -> [T; 8] {
    let a = o.to_array();
    let b = c.to_array();
    [a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]]
}

fn unpack<T: Scalar>(x: &[T]) -> (OrderParams<T>, ConjugateParams<T>) {
    (OrderParams::from_slice(&x[..4]), ConjugateParams::from_slice(&x[4..8]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T> {
    /// Required L∞ residual of the self-consistent map.
    pub tol: T,
    pub damping: T,
    pub picard_iter: usize,
    /// Newton refinement after the damped iteration.
    pub newton: bool,
    /// Fall back to descending-α continuation when direct informative seeds fail.
    pub continuation: bool,
}

impl<T: Scalar> Default for SolverConfig<T> {
    fn default() -> Self {
        Self { tol: T::lit(1e-10), damping: T::lit(0.5), picard_iter: 400, newton: true, continuation: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Init<T> {
    /// Try informative and trivial starts; prefer the informative solution.
    Auto,
    Informative,
    Trivial,
    Warm(OrderParams<T>, ConjugateParams<T>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WganSolution<T> {
    pub order: OrderParams<T>,
    pub conj: ConjugateParams<T>,
    pub free_energy: T,
    pub eps_g: T,
    /// L∞ norm of `update(x) − x` over all eight variables.
    pub residual: T,
    pub iterations: usize,
    pub converged: bool,
    pub branch: Branch,
}

fn update8<T: Scalar>(x: &[T], p: &GanParams<T>) -> Option<Vec<T>> {
    let (o, c) = unpack(x);
    let (o2, c2) = wgan_update(&o, &c, p).ok()?;
    Some(pack(&o2, &c2).to_vec())
}

fn residual8<T: Scalar>(o: &OrderParams<T>, c: &ConjugateParams<T>, p: &GanParams<T>) -> Option<T> {
    let x = pack(o, c);
    let u = update8(&x, p)?;
    let r = max_abs_diff(&u, &x);
    r.is_finite().then_some(r)
}

struct Attempt<T> {
    order: OrderParams<T>,
    conj: ConjugateParams<T>,
    residual: T,
    iterations: usize,
}

/// Damped iteration from `(o, c)`, refined by Newton on the composed map
/// `o ↦ orders(conjugates(o))`.
fn attempt<T: Scalar>(o: OrderParams<T>, c: ConjugateParams<T>, p: &GanParams<T>, cfg: &SolverConfig<T>) -> Option<Attempt<T>> {
    let fp = FixedPointConfig {
        damping: cfg.damping,
        tol: cfg.tol,
        max_iter: cfg.picard_iter,
        ..FixedPointConfig::default()
    };
    let x0 = pack(&o, &c);
    let (mut o, mut iterations) = match damped_fixed_point(|x| update8(x, p), &x0, &fp) {
        Ok(rep) => (OrderParams::from_slice(&rep.solution[..4]), rep.iterations),
        Err(_) => (o, 0),
    };
    let mut c = conjugates_from(&o, p).ok()?;
    let mut res = residual8(&o, &c, p).unwrap_or(T::infinity());
    if cfg.newton && res > cfg.tol {
        let g = |v: &[T]| -> Option<Vec<T>> {
            let oo = OrderParams::from_slice(v);
            let cc = conjugates_from(&oo, p).ok()?;
            let on = orders_from(&cc, p).ok()?;
            Some(on.to_array().iter().zip(v).map(|(&a, &b)| a - b).collect())
        };
        let ncfg = NewtonConfig { tol: cfg.tol * T::lit(1e-3), ..NewtonConfig::default() };
        let rep = newton_solve(g, &o.to_array(), &ncfg);
        iterations += rep.iterations;
        let on = OrderParams::from_slice(&rep.solution);
        if let Ok(cn) = conjugates_from(&on, p) {
            if let Some(rn) = residual8(&on, &cn, p) {
                if rn < res {
                    o = on;
                    c = cn;
                    res = rn;
                }
            }
        }
    }
    res.is_finite().then_some(Attempt { order: o, conj: c, residual: res, iterations })
}

/// Flips `(b, b̂)` so that the generator overlap with the signal is
/// non-negative; the equations are invariant under this sign change.
fn canonical<T: Scalar>(mut a: Attempt<T>) -> Attempt<T> {
    if a.conj.b_hat * a.conj.m_hat > T::zero() {
        a.order.b = -a.order.b;
        a.conj.b_hat = -a.conj.b_hat;
    }
    a
}

fn finish<T: Scalar>(a: Attempt<T>, p: &GanParams<T>, cfg: &SolverConfig<T>, branch: Branch) -> WganSolution<T> {
    let a = canonical(a);
    WganSolution {
        free_energy: wgan_free_energy(&a.order, &a.conj, p).unwrap_or(T::nan()),
        eps_g: generalization_error(&a.order, &a.conj, p).unwrap_or(T::nan()),
        residual: a.residual,
        iterations: a.iterations,
        converged: a.residual <= cfg.tol,
        branch,
        order: a.order,
        conj: a.conj,
    }
}

fn accept<T: Scalar>(a: &Attempt<T>, want: Branch, cfg: &SolverConfig<T>) -> bool {
    a.residual <= cfg.tol && classify(&a.order) == Some(want)
}

fn seeded<T: Scalar>(o: OrderParams<T>, p: &GanParams<T>, cfg: &SolverConfig<T>) -> Option<Attempt<T>> {
    let c = conjugates_from(&o, p).ok()?;
    attempt(o, c, p, cfg)
}

fn informative_seeds<T: Scalar>(p: &GanParams<T>) -> Vec<OrderParams<T>> {
    let half = T::lit(0.5);
    let one = T::one();
    let mut seeds = vec![OrderParams { q: half, chi: half, delta: T::zero(), m: half, b: half }];
    let s = (one / (one + p.alpha)).sqrt();
    for sign in [one, -one] {
        seeds.push(OrderParams {
            q: one / (one + p.alpha_tilde()),
            chi: one / (p.eta * (one + p.alpha)),
            delta: T::zero(),
            m: s,
            b: sign * s,
        });
    }
    seeds
}

fn solve_informative<T: Scalar>(p: &GanParams<T>, cfg: &SolverConfig<T>) -> (Option<Attempt<T>>, Option<Attempt<T>>) {
    let mut best: Option<Attempt<T>> = None;
    for o in informative_seeds(p) {
        if let Some(a) = seeded(o, p, cfg) {
            if accept(&a, Branch::Informative, cfg) {
                return (Some(a), None);
            }
            keep_best(&mut best, a);
        }
    }
    let start = T::lit(1e4);
    if cfg.continuation && p.alpha < start && p.alpha > T::zero() {
        if let Some(a) = continuation(p, cfg, start) {
            return (Some(a), None);
        }
    }
    (None, best)
}

/// Tracks the informative branch down from `alpha = start`, where it is easy
/// to seed, to the requested `alpha`.
fn continuation<T: Scalar>(p: &GanParams<T>, cfg: &SolverConfig<T>, start: T) -> Option<Attempt<T>> {
    let ratio = T::lit(0.7);
    let mut alpha = start;
    let mut cur: Option<Attempt<T>> = None;
    for o in informative_seeds(&p.with_alpha(alpha)) {
        if let Some(a) = seeded(o, &p.with_alpha(alpha), cfg) {
            if accept(&a, Branch::Informative, cfg) {
                cur = Some(a);
                break;
            }
        }
    }
    let mut cur = cur?;
    loop {
        alpha = (alpha * ratio).max(p.alpha);
        let q = p.with_alpha(alpha);
        let a = attempt(cur.order, cur.conj, &q, cfg)?;
        if !accept(&a, Branch::Informative, cfg) {
            return None;
        }
        cur = a;
        if alpha == p.alpha {
            return Some(cur);
        }
    }
}

fn solve_trivial<T: Scalar>(p: &GanParams<T>, cfg: &SolverConfig<T>) -> (Option<Attempt<T>>, Option<Attempt<T>>) {
    let one = T::one();
    let mut chis = vec![one / (p.eta * (one + p.alpha)), one / p.lambda];
    chis.extend([0.5, 0.1, 0.9, 0.01].map(T::lit));
    let mut best = None;
    for chi in chis {
        let o = OrderParams { chi, ..OrderParams::default() };
        if let Some(a) = seeded(o, p, cfg) {
            if accept(&a, Branch::Trivial, cfg) {
                return (Some(a), None);
            }
            keep_best(&mut best, a);
        }
    }
    (None, best)
}

fn keep_best<T: Scalar>(best: &mut Option<Attempt<T>>, a: Attempt<T>) {
    if best.as_ref().is_none_or(|b| a.residual < b.residual) {
        *best = Some(a);
    }
}

fn failure<T: Scalar>(best: Option<Attempt<T>>, p: &GanParams<T>, cfg: &SolverConfig<T>, fallback: Branch) -> WganSolution<T> {
    match best {
        Some(a) => {
            // m = 0 ≠ b states are not trivial; report them as failed informative candidates
            let branch = classify(&a.order).unwrap_or(Branch::Informative);
            let mut s = finish(a, p, cfg, branch);
            s.converged = false;
            s
        }
        None => WganSolution {
            order: OrderParams { q: T::nan(), chi: T::nan(), delta: T::zero(), m: T::nan(), b: T::nan() },
            conj: ConjugateParams {
                q_hat: T::nan(),
                chi_hat: T::nan(),
                delta_hat: T::zero(),
                m_hat: T::nan(),
                b_hat: T::nan(),
            },
            free_energy: T::nan(),
            eps_g: T::nan(),
            residual: T::infinity(),
            iterations: 0,
            converged: false,
            branch: fallback,
        },
    }
}

/// Solves the self-consistent equations (with `Δ = Δ̂ = 0`).
///
/// Every start runs the damped iteration followed by Newton refinement;
/// informative starts fall back to continuation in `α`. Solutions with
/// `m = 0 ≠ b` are rejected. If no start converges the best attempt is
/// returned with `converged = false`.
pub fn solve_wgan<T: Scalar>(params: &GanParams<T>, config: &SolverConfig<T>, init: Init<T>) -> Result<WganSolution<T>> {
    params.validate()?;
    if !(config.tol > T::zero() && config.damping > T::zero() && config.damping <= T::one()) {
        return Err(Error::domain("solver tolerance must be positive and damping in (0, 1]"));
    }
    let p = params;
    let cfg = config;
    Ok(match init {
        Init::Warm(o, c) => {
            let o = OrderParams { delta: T::zero(), ..o };
            let c = ConjugateParams { delta_hat: T::zero(), ..c };
            match attempt(o, c, p, cfg) {
                Some(a) => match classify(&a.order) {
                    Some(br) if a.residual <= cfg.tol => finish(a, p, cfg, br),
                    _ => failure(Some(a), p, cfg, Branch::Informative),
                },
                None => failure(None, p, cfg, Branch::Informative),
            }
        }
        Init::Informative => match solve_informative(p, cfg) {
            (Some(a), _) => finish(a, p, cfg, Branch::Informative),
            (None, best) => failure(best, p, cfg, Branch::Informative),
        },
        Init::Trivial => match solve_trivial(p, cfg) {
            (Some(a), _) => finish(a, p, cfg, Branch::Trivial),
            (None, best) => failure(best, p, cfg, Branch::Trivial),
        },
        Init::Auto => {
            let (inf, inf_best) = solve_informative(p, cfg);
            if let Some(a) = inf {
                return Ok(finish(a, p, cfg, Branch::Informative));
            }
            let (triv, triv_best) = solve_trivial(p, cfg);
            if let Some(a) = triv {
                return Ok(finish(a, p, cfg, Branch::Trivial));
            }
            let mut best = inf_best;
            if let Some(t) = triv_best {
                keep_best(&mut best, t);
            }
            failure(best, p, cfg, Branch::Trivial)
        }
    })
}
