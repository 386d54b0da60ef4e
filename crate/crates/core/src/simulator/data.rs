use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::{Error, Result};

/// Real samples `x^μ = w*·c_μ/√d + √η·n^μ`, stored row-major (`n × d`).
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset {
    pub x: Vec<f64>,
    pub c: Vec<f64>,
    pub w_star: Vec<f64>,
    pub eta: f64,
    pub seed: u64,
    pub n: usize,
    pub d: usize,
}

impl SyntheticDataset {
    pub fn row(&self, mu: usize) -> &[f64] {
        &self.x[mu * self.d..(mu + 1) * self.d]
    }

    /// `‖w*‖²/d`.
    pub fn rho(&self) -> f64 {
        self.w_star.iter().map(|v| v * v).sum::<f64>() / self.d as f64
    }
}

/// Frozen fake-sample latents `z` and generator noises (`ñ × d`).
#[derive(Debug, Clone, PartialEq)]
pub struct FakeSampleSet {
    pub z: Vec<f64>,
    pub noise: Vec<f64>,
    pub eta_tilde: f64,
    pub n: usize,
    pub d: usize,
}

impl FakeSampleSet {
    pub fn noise_row(&self, mu: usize) -> &[f64] {
        &self.noise[mu * self.d..(mu + 1) * self.d]
    }

    /// Fake sample `g = w·z/√d + √η̃·ñ` for generator weights `w`.
    pub fn sample(&self, mu: usize, w: &[f64]) -> Vec<f64> {
        let sd = (self.d as f64).sqrt();
        let se = self.eta_tilde.sqrt();
        w.iter()
            .zip(self.noise_row(mu))
            .map(|(wi, ni)| wi * self.z[mu] / sd + se * ni)
            .collect()
    }
}

fn normals(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    (0..k).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn generate_dataset(d: usize, n: usize, eta: f64, seed: u64) -> Result<SyntheticDataset> {
    if d < 2 {
        return Err(Error::domain(format!("dimension d = {d} must be at least 2")));
    }
    if !(eta >= 0.0 && eta.is_finite()) {
        return Err(Error::domain(format!("eta = {eta} must be >= 0")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w_star = normals(&mut rng, d);
    let c = normals(&mut rng, n);
    let noise = normals(&mut rng, n * d);
    let sd = (d as f64).sqrt();
    let se = eta.sqrt();
    let mut x = Vec::with_capacity(n * d);
    for mu in 0..n {
        for i in 0..d {
            x.push(w_star[i] * c[mu] / sd + se * noise[mu * d + i]);
        }
    }
    Ok(SyntheticDataset { x, c, w_star, eta, seed, n, d })
}

pub fn generate_fakes(d: usize, n: usize, eta_tilde: f64, seed: u64) -> Result<FakeSampleSet> {
    if d < 2 {
        return Err(Error::domain(format!("dimension d = {d} must be at least 2")));
    }
    if !(eta_tilde >= 0.0 && eta_tilde.is_finite()) {
        return Err(Error::domain(format!("eta_tilde = {eta_tilde} must be >= 0")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = normals(&mut rng, n);
    let noise = normals(&mut rng, n * d);
    Ok(FakeSampleSet { z, noise, eta_tilde, n, d })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_rows_are_parallel() {
        let ds = generate_dataset(10, 5, 0.0, 3).unwrap();
        let ws: f64 = ds.w_star.iter().map(|v| v * v).sum::<f64>().sqrt();
        for mu in 0..5 {
            let r = ds.row(mu);
            let rn: f64 = r.iter().map(|v| v * v).sum::<f64>().sqrt();
            let dot: f64 = r.iter().zip(&ds.w_star).map(|(a, b)| a * b).sum();
            assert!((dot.abs() - rn * ws).abs() < 1e-12 * (1.0 + rn * ws));
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(generate_dataset(20, 7, 0.5, 11).unwrap(), generate_dataset(20, 7, 0.5, 11).unwrap());
        assert_ne!(generate_dataset(20, 7, 0.5, 11).unwrap(), generate_dataset(20, 7, 0.5, 12).unwrap());
        assert!(generate_dataset(1, 7, 0.5, 11).is_err());
    }

    #[test]
    fn rho_near_one() {
        let ds = generate_dataset(400, 1, 1.0, 5).unwrap();
        assert!((0.9..=1.1).contains(&ds.rho()));
    }
}
