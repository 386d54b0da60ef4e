use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

/// Parses `start:stop:scale:count` (scale `linear` or `log`), a comma list,
/// or a single number. Endpoints are reproduced exactly; a zero count gives an
/// empty grid.
pub fn parse_grid(key: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::Config(format!("{key}: {why} in {text:?}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(&format!("malformed number {s:?}")));
    let parts: Vec<&str> = text.split(':').collect();
    match parts.len() {
        1 => text.split(',').map(num).collect(),
        4 => {
            let (start, stop) = (num(parts[0])?, num(parts[1])?);
            let scale = match parts[2].trim() {
                "linear" => Scale::Linear,
                "log" => Scale::Log,
                s => return Err(bad(&format!("unknown scale {s:?} (expected linear or log)"))),
            };
            let count: usize = parts[3].trim().parse().map_err(|_| bad("malformed count"))?;
            if count == 0 {
                return Ok(Vec::new());
            }
            if scale == Scale::Log && !(start > 0.0 && stop > 0.0) {
                return Err(bad("log grids need positive endpoints"));
            }
            if count == 1 {
                return Ok(vec![start]);
            }
            let last = (count - 1) as f64;
            Ok((0..count)
                .map(|i| {
                    if i == count - 1 {
                        return stop;
                    }
                    let t = i as f64 / last;
                    match scale {
                        Scale::Linear => start + (stop - start) * t,
                        Scale::Log => start * (stop / start).powf(t),
                    }
                })
                .collect())
        }
        _ => Err(bad("expected start:stop:scale:count")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid() {
        let g = parse_grid("alpha-grid", "0.5:50:log:40").unwrap();
        assert_eq!(g.len(), 40);
        assert_eq!((g[0], g[39]), (0.5, 50.0));
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        let ratio = g[1] / g[0];
        assert!(g.windows(2).all(|w| (w[1] / w[0] - ratio).abs() < 1e-12));
    }

    #[test]
    fn linear_grid_and_lists() {
        let g = parse_grid("r", "0.05:2:linear:79").unwrap();
        assert!((g[18] - 0.5).abs() < 1e-15);
        assert_eq!(parse_grid("r", "0.2, 0.5,2").unwrap(), vec![0.2, 0.5, 2.0]);
        assert_eq!(parse_grid("r", "3").unwrap(), vec![3.0]);
        assert!(parse_grid("r", "1:2:linear:0").unwrap().is_empty());
    }

    #[test]
    fn malformed() {
        for s in ["1:2:cubic:3", "1:2:log", "a", "0:1:log:3", "1:2:linear:x"] {
            let e = parse_grid("k", s).unwrap_err().to_string();
            assert!(e.starts_with("k:"), "{e}");
        }
    }
}
