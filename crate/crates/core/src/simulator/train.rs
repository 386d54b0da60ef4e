use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{value_function, FakeSampleSet, SyntheticDataset};
use crate::gan::GanParams;
use crate::{Error, Result};

/// Norm of `w` or `v` beyond which training is declared divergent.
const DIVERGENCE_NORM: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GdaConfig {
    pub lr_w: f64,
    pub lr_v: f64,
    /// Per-coordinate RMS gradient below which both players are stationary.
    pub grad_tol: f64,
    pub max_steps: usize,
    pub seed: u64,
}

impl Default for GdaConfig {
    fn default() -> Self {
        Self { lr_w: 1e-2, lr_v: 1e-2, grad_tol: 1e-7, max_steps: 100_000, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainState {
    pub w: Vec<f64>,
    pub v: Vec<f64>,
    pub step: usize,
    pub grad_norm_w: f64,
    pub grad_norm_v: f64,
    pub stationary: bool,
    /// Set when training was aborted; explains why.
    pub diagnostic: Option<String>,
}

impl TrainState {
    pub fn diverged(&self) -> bool {
        self.diagnostic.is_some()
    }
}

fn rms(g: &[f64]) -> f64 {
    (g.iter().map(|x| x * x).sum::<f64>() / g.len() as f64).sqrt()
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Simultaneous gradient descent (on `w`) and ascent (on `v`) from a seeded
/// `N(0, 1/4)` initialization.
pub fn gda_train(
    data: &SyntheticDataset,
    fakes: &FakeSampleSet,
    params: &GanParams<f64>,
    config: &GdaConfig,
) -> Result<TrainState> {
    if !(config.lr_w > 0.0 && config.lr_v > 0.0) {
        return Err(Error::domain("learning rates must be positive"));
    }
    let d = data.d;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let init = Normal::new(0.0, 0.5).expect("valid normal");
    let mut w: Vec<f64> = (0..d).map(|_| init.sample(&mut rng)).collect();
    let mut v: Vec<f64> = (0..d).map(|_| init.sample(&mut rng)).collect();
    let mut step = 0;
    loop {
        let g = value_function(&w, &v, data, fakes, params)?;
        let (gw, gv) = (rms(&g.grad_w), rms(&g.grad_v));
        let done = move |w, v, stationary, diagnostic| TrainState {
            w,
            v,
            step,
            grad_norm_w: gw,
            grad_norm_v: gv,
            stationary,
            diagnostic,
        };
        if !(gw.is_finite() && gv.is_finite()) {
            return Ok(done(w, v, false, Some(format!("non-finite gradient at step {step}"))));
        }
        if gw <= config.grad_tol && gv <= config.grad_tol {
            return Ok(done(w, v, true, None));
        }
        if step >= config.max_steps {
            return Ok(done(w, v, false, None));
        }
        for (wi, g) in w.iter_mut().zip(&g.grad_w) {
            *wi -= config.lr_w * g;
        }
        for (vi, g) in v.iter_mut().zip(&g.grad_v) {
            *vi += config.lr_v * g;
        }
        step += 1;
        let (nw, nv) = (norm(&w), norm(&v));
        if nw > DIVERGENCE_NORM || nv > DIVERGENCE_NORM {
            let msg = format!("diverged at step {step}: |w| = {nw:.3e}, |v| = {nv:.3e}");
            return Ok(done(w, v, false, Some(msg)));
        }
    }
}
