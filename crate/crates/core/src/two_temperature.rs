//! Exact two-temperature free energies of finite matrix games.
//!
//! For a payoff `V[i][j]` (row `i` chosen by the minimizer, column `j` by the
//! maximizer) the free energy density is
//!
//! ```text
//! f = -1/(β_min d_x) · log Σ_i ( Σ_j exp(β_max V[i][j]) )^p,   p = -β_min/β_max
//! ```
//!
//! which tends to `min_i max_j V` when `β_max → ∞` before `β_min → ∞`.

use std::io::Read;
use std::path::Path;

use crate::numerics::special::lse_unchecked;
use crate::{Error, Result, Scalar};

/// Inverse temperatures of the minimizing and maximizing players.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperaturePair<T> {
    pub beta_min: T,
    pub beta_max: T,
}

impl<T: Scalar> TemperaturePair<T> {
    pub fn new(beta_min: T, beta_max: T) -> Result<Self> {
        let t = Self { beta_min, beta_max };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, b) in [("beta_min", self.beta_min), ("beta_max", self.beta_max)] {
            if !(b > T::zero() && b.is_finite()) {
                return Err(Error::domain(format!("{name} = {b} must be positive and finite")));
            }
        }
        Ok(())
    }

    /// The replica ratio `p = -β_min/β_max`.
    pub fn p(&self) -> T {
        -self.beta_min / self.beta_max
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteGame<T> {
    payoff: Vec<Vec<T>>,
    norm_dim: T,
}

impl<T: Scalar> DiscreteGame<T> {
    /// Rows are minimizer strategies, columns maximizer strategies.
    pub fn new(payoff: Vec<Vec<T>>) -> Result<Self> {
        let cols = payoff.first().map_or(0, Vec::len);
        if payoff.is_empty() || cols == 0 {
            return Err(Error::domain("payoff matrix is empty"));
        }
        if payoff.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("payoff rows have unequal lengths".into()));
        }
        if payoff.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::domain("payoff contains a non-finite entry"));
        }
        Ok(Self { payoff, norm_dim: T::one() })
    }

    pub fn with_norm_dim(mut self, d: T) -> Result<Self> {
        if !(d > T::zero() && d.is_finite()) {
            return Err(Error::domain(format!("norm_dim = {d} must be positive")));
        }
        self.norm_dim = d;
        Ok(self)
    }

    /// Reads a headerless CSV matrix.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let mut rows = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            let row = rec
                .iter()
                .map(|s| {
                    s.parse::<f64>()
                        .map(T::lit)
                        .map_err(|_| Error::Parse(format!("row {}: cannot parse {s:?}", line + 1)))
                })
                .collect::<Result<Vec<T>>>()?;
            rows.push(row);
        }
        Self::new(rows)
    }

    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let f = std::fs::File::open(path.as_ref())
            .map_err(|e| Error::Parse(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_csv(f)
    }

    pub fn payoff(&self) -> &[Vec<T>] {
        &self.payoff
    }

    pub fn norm_dim(&self) -> T {
        self.norm_dim
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.payoff.len(), self.payoff[0].len())
    }

    /// The game seen from the other side: `-Vᵀ`, so that its min-max is
    /// minus the max-min of the original.
    pub fn role_swapped(&self) -> Self {
        let (n, m) = self.shape();
        let payoff = (0..m).map(|j| (0..n).map(|i| -self.payoff[i][j]).collect()).collect();
        Self { payoff, norm_dim: self.norm_dim }
    }
}

/// Finite-temperature free energy density of a matrix game.
///
/// Evaluated in shifted form so that every exponent is non-positive; a 1×1
/// game returns its entry exactly.
pub fn finite_temperature_value<T: Scalar>(game: &DiscreteGame<T>, temps: &TemperaturePair<T>) -> Result<T> {
    temps.validate()?;
    let (bmin, bmax) = (temps.beta_min, temps.beta_max);
    // H_i = (1/β_max) log Σ_j exp(β_max V_ij)
    let h: Vec<T> = game
        .payoff
        .iter()
        .map(|row| {
            let top = row.iter().copied().fold(T::neg_infinity(), T::max);
            let shifted: Vec<T> = row.iter().map(|&v| bmax * (v - top)).collect();
            top + lse_unchecked(&shifted) / bmax
        })
        .collect();
    let low = h.iter().copied().fold(T::infinity(), T::min);
    let shifted: Vec<T> = h.iter().map(|&v| -bmin * (v - low)).collect();
    Ok((low - lse_unchecked(&shifted) / bmin) / game.norm_dim)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureMinMax<T> {
    pub value: T,
    pub argmin: usize,
    pub argmax: usize,
}

/// `min_i max_j V[i][j]`; ties go to the lowest index.
pub fn brute_force_minmax<T: Scalar>(game: &DiscreteGame<T>) -> PureMinMax<T> {
    let mut best: Option<PureMinMax<T>> = None;
    for (i, row) in game.payoff.iter().enumerate() {
        let mut jmax = 0;
        for (j, &v) in row.iter().enumerate() {
            if v > row[jmax] {
                jmax = j;
            }
        }
        if best.is_none_or(|b| row[jmax] < b.value) {
            best = Some(PureMinMax { value: row[jmax], argmin: i, argmax: jmax });
        }
    }
    best.expect("validated non-empty game")
}

/// `max_j min_i V[i][j]`, via the role-swapped game.
pub fn brute_force_maxmin<T: Scalar>(game: &DiscreteGame<T>) -> T {
    -brute_force_minmax(&game.role_swapped()).value
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitOrderRow<T> {
    pub beta_min: T,
    pub beta_max: T,
    /// Free energy at `(β, β·ratio)`; tends to the min-max value.
    pub value: T,
    pub minmax: T,
    /// `-f(-Vᵀ)` at the same temperatures; tends to the max-min value.
    pub swapped: T,
    pub maxmin: T,
}

impl<T: Scalar> LimitOrderRow<T> {
    pub fn delta_minmax(&self) -> T {
        (self.value - self.minmax).abs()
    }
    pub fn delta_maxmin(&self) -> T {
        (self.swapped - self.maxmin).abs()
    }
}

/// Free energy and its role-swapped counterpart along a temperature schedule.
pub fn limit_order_diagnostic<T: Scalar>(
    game: &DiscreteGame<T>,
    schedule: &[T],
    ratio: T,
) -> Result<Vec<LimitOrderRow<T>>> {
    if !(ratio >= T::one()) {
        return Err(Error::domain(format!("temperature ratio {ratio} must be >= 1")));
    }
    if schedule.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain("beta schedule must be strictly increasing"));
    }
    let swapped_game = game.role_swapped();
    let minmax = brute_force_minmax(game).value;
    let maxmin = -brute_force_minmax(&swapped_game).value;
    schedule
        .iter()
        .map(|&beta| {
            let temps = TemperaturePair::new(beta, beta * ratio)?;
            Ok(LimitOrderRow {
                beta_min: beta,
                beta_max: beta * ratio,
                value: finite_temperature_value(game, &temps)?,
                minmax,
                swapped: -finite_temperature_value(&swapped_game, &temps)?,
                maxmin,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pennies() -> DiscreteGame<f64> {
        DiscreteGame::new(vec![vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap()
    }

    #[test]
    fn single_entry() {
        let g = DiscreteGame::new(vec![vec![2.75]]).unwrap();
        for (a, b) in [(0.1, 3.0), (1e4, 1e2), (7.0, 7.0)] {
            let t = TemperaturePair::new(a, b).unwrap();
            assert_eq!(finite_temperature_value(&g, &t).unwrap(), 2.75);
        }
        assert_eq!(brute_force_minmax(&g).value, 2.75);
        assert_eq!(brute_force_maxmin(&g), 2.75);
    }

    #[test]
    fn pure_entropy() {
        let g = DiscreteGame::new(vec![vec![0.0; 2]; 2]).unwrap();
        let t = TemperaturePair::new(1.7, 4.2).unwrap();
        let want = 2f64.ln() / 4.2 - 2f64.ln() / 1.7;
        assert_abs_diff_eq!(finite_temperature_value(&g, &t).unwrap(), want, epsilon = 1e-15);
    }

    #[test]
    fn matching_pennies() {
        let t = TemperaturePair::new(1e3, 1e3).unwrap();
        assert_abs_diff_eq!(finite_temperature_value(&pennies(), &t).unwrap(), 1.0, epsilon = 2e-3);
        assert_eq!(brute_force_minmax(&pennies()).value, 1.0);
        assert_eq!(brute_force_maxmin(&pennies()), -1.0);
    }

    #[test]
    fn enumeration_examples() {
        let g = DiscreteGame::new(vec![vec![0.0, 5.0], vec![-1.0, 2.0]]).unwrap();
        let mm = brute_force_minmax(&g);
        assert_eq!((mm.value, mm.argmin, mm.argmax), (2.0, 1, 1));
        // pure saddle at row 0, column 1
        let s = DiscreteGame::new(vec![vec![1.0, 2.0], vec![0.0, 3.0]]).unwrap();
        assert_eq!(brute_force_minmax(&s).value, 2.0);
        assert_eq!(brute_force_maxmin(&s), 2.0);
    }

    #[test]
    fn diagnostic_columns() {
        let rows = limit_order_diagnostic(&pennies(), &[10.0, 100.0, 1000.0], 10.0).unwrap();
        assert!(rows.windows(2).all(|w| w[1].delta_minmax() < w[0].delta_minmax()));
        assert!(rows.windows(2).all(|w| w[1].delta_maxmin() < w[0].delta_maxmin()));
        assert!(rows[2].delta_minmax() < 1e-3 && rows[2].delta_maxmin() < 1e-3);
        assert!(limit_order_diagnostic(&pennies(), &[2.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn csv_input() {
        let g = DiscreteGame::<f64>::from_csv("# pennies\n1, -1\n-1, 1\n".as_bytes()).unwrap();
        assert_eq!(g, pennies());
        assert!(DiscreteGame::<f64>::from_csv("1,x\n".as_bytes()).is_err());
        assert!(DiscreteGame::<f64>::from_csv("1,2\n3\n".as_bytes()).is_err());
    }

    #[test]
    fn invalid_temperatures() {
        assert!(TemperaturePair::new(0.0, 1.0).is_err());
        assert!(TemperaturePair::new(1.0, f64::INFINITY).is_err());
        let t = TemperaturePair::new(2.0, 8.0).unwrap();
        assert_eq!(t.p(), -0.25);
    }
}
