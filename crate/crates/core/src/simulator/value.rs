use super::{FakeSampleSet, SyntheticDataset};
use crate::gan::GanParams;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ValueAndGrad {
    pub value: f64,
    pub grad_w: Vec<f64>,
    pub grad_v: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Quadratic WGAN value
/// `Σ_μ (v·x^μ/√d)²/2 − Σ_μ̃ (v·g^μ̃/√d)²/2 − λ‖v‖²/2 + λ̃‖w‖²/2`
/// with analytic gradients in `w` and `v`.
pub fn value_function(
    w: &[f64],
    v: &[f64],
    data: &SyntheticDataset,
    fakes: &FakeSampleSet,
    params: &GanParams<f64>,
) -> Result<ValueAndGrad> {
    let d = data.d;
    if w.len() != d || v.len() != d || fakes.d != d {
        return Err(Error::domain(format!(
            "dimension mismatch: w {}, v {}, data {}, fakes {}",
            w.len(),
            v.len(),
            d,
            fakes.d
        )));
    }
    let df = d as f64;
    let sd = df.sqrt();
    let se = fakes.eta_tilde.sqrt();
    let mut value = 0.5 * params.lambda_tilde * dot(w, w) - 0.5 * params.lambda * dot(v, v);
    let mut grad_v: Vec<f64> = v.iter().map(|vi| -params.lambda * vi).collect();
    let mut grad_w: Vec<f64> = w.iter().map(|wi| params.lambda_tilde * wi).collect();

    for mu in 0..data.n {
        let x = data.row(mu);
        let s = dot(v, x) / sd;
        value += 0.5 * s * s;
        for (g, xi) in grad_v.iter_mut().zip(x) {
            *g += s * xi / sd;
        }
    }
    let vw = dot(v, w);
    let mut zs = 0.0;
    for mu in 0..fakes.n {
        let nrow = fakes.noise_row(mu);
        let z = fakes.z[mu];
        // v·g/√d with g = w z/√d + √η̃ ñ
        let s = vw * z / df + se * dot(v, nrow) / sd;
        value -= 0.5 * s * s;
        zs += s * z;
        for ((g, wi), ni) in grad_v.iter_mut().zip(w).zip(nrow) {
            *g -= s * (wi * z / sd + se * ni) / sd;
        }
    }
    for (g, vi) in grad_w.iter_mut().zip(v) {
        *g -= zs * vi / df;
    }
    Ok(ValueAndGrad { value, grad_w, grad_v })
}
