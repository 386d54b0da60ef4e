use rayon::prelude::*;

use super::{derive_seed, gda_train, generate_dataset, generate_fakes, GdaConfig, SyntheticDataset, TrainState};
use crate::gan::{solve_wgan, GanParams, Init, SolverConfig, WganSolution};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    /// `‖w − w*‖²/d`.
    pub eps_g: f64,
    /// `min(‖w − w*‖², ‖w + w*‖²)/d`: the generator is only identifiable up
    /// to the sign of `w*`.
    pub eps_g_aligned: f64,
    /// `v·w*/d`.
    pub m: f64,
    /// `v·w/d`.
    pub b: f64,
    /// `‖v‖²/d`.
    pub q: f64,
}

pub fn empirical_observables(state: &TrainState, data: &SyntheticDataset) -> Observables {
    let d = data.d as f64;
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let diff: f64 = state.w.iter().zip(&data.w_star).map(|(a, b)| (a - b) * (a - b)).sum();
    let eps_g = diff / d;
    let overlap = dot(&state.w, &data.w_star) / d;
    Observables {
        eps_g,
        eps_g_aligned: eps_g + 4.0 * overlap.min(0.0),
        m: dot(&state.v, &data.w_star) / d,
        b: dot(&state.v, &state.w) / d,
        q: dot(&state.v, &state.v) / d,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareConfig {
    /// Learning rates, tolerance and step budget; the seed is derived per run.
    pub gda: GdaConfig,
    pub master_seed: u64,
    pub solver: SolverConfig<f64>,
    /// Tolerance is `se_factor·SE + allowance`.
    pub se_factor: f64,
    pub allowance: f64,
}

impl Default for CompareConfig {
    fn default() -> Self {
        Self {
            gda: GdaConfig::default(),
            master_seed: 0,
            solver: SolverConfig::default(),
            se_factor: 3.0,
            allowance: 0.1,
        }
    }
}

/// Sample means and standard errors over the stationary runs. Signs of `m`
/// and `b` are dropped (`v → −v` is a symmetry) and `ε_g` is sign-aligned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalStats {
    pub eps_g_mean: f64,
    pub eps_g_se: f64,
    pub m_emp: f64,
    pub m_se: f64,
    pub b_emp: f64,
    pub b_se: f64,
    pub q_emp: f64,
    pub q_se: f64,
    pub n_seeds: usize,
    pub n_stationary: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedRun {
    pub index: usize,
    pub seed: u64,
    pub observables: Observables,
    pub stationary: bool,
    pub steps: usize,
    pub diagnostic: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub params: GanParams<f64>,
    pub d: usize,
    pub stats: EmpiricalStats,
    pub replica: WganSolution<f64>,
    pub runs: Vec<SeedRun>,
    /// `|empirical − replica|` for `(ε_g, m, b, q)`.
    pub deltas: [f64; 4],
    /// Whether each delta is within `se_factor·SE + allowance`.
    pub within: [bool; 4],
    /// Fewer than half the seeds reached stationarity.
    pub inconclusive: bool,
}

impl ComparisonReport {
    pub fn agrees(&self) -> bool {
        !self.inconclusive && self.within.iter().all(|&w| w)
    }
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

fn sample_count(ratio: f64, d: usize) -> usize {
    (ratio * d as f64).round() as usize
}

/// One seeded training run: data, fakes and initialization all derive from
/// `(master_seed, index)`, so results do not depend on scheduling.
pub fn run_seed(params: &GanParams<f64>, d: usize, master_seed: u64, index: usize, gda: &GdaConfig) -> Result<SeedRun> {
    let seed = derive_seed(master_seed, index as u64);
    let n = sample_count(params.alpha, d);
    let n_fake = sample_count(params.alpha_tilde(), d);
    let data = generate_dataset(d, n, params.eta, derive_seed(seed, 0))?;
    let fakes = generate_fakes(d, n_fake, params.eta_tilde, derive_seed(seed, 1))?;
    let gda = GdaConfig { seed: derive_seed(seed, 2), ..*gda };
    let state = gda_train(&data, &fakes, params, &gda)?;
    Ok(SeedRun {
        index,
        seed,
        observables: empirical_observables(&state, &data),
        stationary: state.stationary,
        steps: state.step,
        diagnostic: state.diagnostic,
    })
}

/// Runs one training per seed in parallel and compares the aggregated
/// observables with the replica solution at the same parameters.
pub fn replica_vs_simulation(
    params: &GanParams<f64>,
    d: usize,
    n_seeds: usize,
    config: &CompareConfig,
) -> Result<ComparisonReport> {
    params.validate()?;
    if n_seeds < 5 {
        return Err(Error::domain(format!("n_seeds = {n_seeds} must be at least 5")));
    }
    let runs = (0..n_seeds)
        .into_par_iter()
        .map(|i| run_seed(params, d, config.master_seed, i, &config.gda))
        .collect::<Result<Vec<_>>>()?;

    let ok: Vec<Observables> = runs.iter().filter(|r| r.stationary).map(|r| r.observables).collect();
    let col = |f: fn(&Observables) -> f64| mean_se(&ok.iter().map(f).collect::<Vec<_>>());
    let (eps_g_mean, eps_g_se) = col(|o| o.eps_g_aligned);
    let (m_emp, m_se) = col(|o| o.m.abs());
    let (b_emp, b_se) = col(|o| o.b.abs());
    let (q_emp, q_se) = col(|o| o.q);
    let stats = EmpiricalStats {
        eps_g_mean,
        eps_g_se,
        m_emp,
        m_se,
        b_emp,
        b_se,
        q_emp,
        q_se,
        n_seeds,
        n_stationary: ok.len(),
    };

    let replica = solve_wgan(params, &config.solver, Init::Auto)?;
    let rep = [replica.eps_g, replica.order.m.abs(), replica.order.b.abs(), replica.order.q];
    let emp = [(eps_g_mean, eps_g_se), (m_emp, m_se), (b_emp, b_se), (q_emp, q_se)];
    let mut deltas = [f64::NAN; 4];
    let mut within = [false; 4];
    for k in 0..4 {
        deltas[k] = (emp[k].0 - rep[k]).abs();
        within[k] = deltas[k] <= config.se_factor * emp[k].1 + config.allowance;
    }
    Ok(ComparisonReport {
        params: *params,
        d,
        stats,
        replica,
        runs,
        deltas,
        within,
        inconclusive: 2 * ok.len() < n_seeds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observables_of_simple_states() {
        let data = generate_dataset(50, 0, 1.0, 3).unwrap();
        let rho = data.rho();
        let st = |w: Vec<f64>, v: Vec<f64>| TrainState {
            w,
            v,
            step: 0,
            grad_norm_w: 0.0,
            grad_norm_v: 0.0,
            stationary: true,
            diagnostic: None,
        };
        let o = empirical_observables(&st(data.w_star.clone(), data.w_star.clone()), &data);
        assert_eq!(o.eps_g, 0.0);
        assert!((o.m - rho).abs() < 1e-12);
        let o = empirical_observables(&st(vec![0.0; 50], vec![0.0; 50]), &data);
        assert!((o.eps_g - rho).abs() < 1e-12);
        let neg: Vec<f64> = data.w_star.iter().map(|x| -x).collect();
        let o = empirical_observables(&st(neg, vec![0.0; 50]), &data);
        assert!((o.eps_g - 4.0 * rho).abs() < 1e-12);
        assert!(o.eps_g_aligned.abs() < 1e-12);
    }

    #[test]
    fn stats() {
        assert_eq!(mean_se(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_se(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-15);
        assert!(mean_se(&[]).0.is_nan());
    }
}
