use crate::{Error, Result, Scalar};

pub const DEFAULT_GRID: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Max,
    Min,
}

impl Mode {
    fn sign<T: Scalar>(self) -> T {
        match self {
            Mode::Min => T::one(),
            Mode::Max => -T::one(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum<T> {
    pub arg: T,
    pub value: T,
}

/// Global extremum of `f` on `[lo, hi]`: a 64-point grid pre-scan followed by
/// Brent refinement on the best cell.
pub fn scalar_extremize<T, F>(f: F, mode: Mode, bracket: (T, T), tol: T) -> Result<Extremum<T>>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    scalar_extremize_with(f, mode, bracket, tol, DEFAULT_GRID)
}

pub fn scalar_extremize_with<T, F>(
    mut f: F,
    mode: Mode,
    bracket: (T, T),
    tol: T,
    grid: usize,
) -> Result<Extremum<T>>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let (xs, gs) = prescan(&mut f, mode, bracket, grid)?;
    let best = argmin(&gs);
    let cand = refine(&mut f, mode, &xs, &gs, best, tol)?;
    Ok(cand)
}

/// Every grid-local extremum, refined and sorted by argument. Used where ties
/// between separated optima matter.
pub fn local_extrema<T, F>(
    mut f: F,
    mode: Mode,
    bracket: (T, T),
    tol: T,
    grid: usize,
) -> Result<Vec<Extremum<T>>>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let (xs, gs) = prescan(&mut f, mode, bracket, grid)?;
    let n = xs.len();
    let mut out: Vec<Extremum<T>> = Vec::new();
    for i in 0..n {
        let left_ok = i == 0 || gs[i] <= gs[i - 1];
        let right_ok = i == n - 1 || gs[i] <= gs[i + 1];
        if left_ok && right_ok {
            let e = refine(&mut f, mode, &xs, &gs, i, tol)?;
            let dup = out
                .iter()
                .any(|o| (o.arg - e.arg).abs() <= tol.max(T::epsilon()) * T::lit(10.0));
            if !dup {
                out.push(e);
            }
        }
    }
    out.sort_by(|a, b| a.arg.partial_cmp(&b.arg).expect("finite arguments"));
    Ok(out)
}

type Scan<T> = (Vec<T>, Vec<T>);

fn prescan<T, F>(f: &mut F, mode: Mode, (lo, hi): (T, T), grid: usize) -> Result<Scan<T>>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::domain(format!("degenerate bracket [{lo}, {hi}]")));
    }
    let grid = grid.max(3);
    let s: T = mode.sign();
    let step = (hi - lo) / T::from_usize_lossy(grid - 1);
    let mut xs = Vec::with_capacity(grid);
    let mut gs = Vec::with_capacity(grid);
    for i in 0..grid {
        let x = if i == grid - 1 { hi } else { lo + step * T::from_usize_lossy(i) };
        let v = eval(f, x)?;
        xs.push(x);
        gs.push(s * v);
    }
    Ok((xs, gs))
}

fn eval<T: Scalar, F: FnMut(T) -> T>(f: &mut F, x: T) -> Result<T> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite {
            at: x.to_f64_lossy(),
            context: format!("objective returned {v}"),
        })
    }
}

fn argmin<T: Scalar>(gs: &[T]) -> usize {
    let mut best = 0;
    for (i, &g) in gs.iter().enumerate() {
        if g < gs[best] {
            best = i;
        }
    }
    best
}

fn refine<T, F>(f: &mut F, mode: Mode, xs: &[T], gs: &[T], i: usize, tol: T) -> Result<Extremum<T>>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let s: T = mode.sign();
    let a = xs[i.saturating_sub(1)];
    let b = xs[(i + 1).min(xs.len() - 1)];
    let (bx, bg) = brent_min(|x| eval(f, x).map(|v| s * v), a, b, xs[i], gs[i], tol)?;
    // never worse than the grid point itself
    let (x, g) = if bg <= gs[i] { (bx, bg) } else { (xs[i], gs[i]) };
    Ok(Extremum { arg: x, value: s * g })
}

/// Brent's minimizer on `[a, b]` started from the interior guess `x0`.
fn brent_min<T, G>(mut g: G, mut a: T, mut b: T, x0: T, g0: T, tol: T) -> Result<(T, T)>
where
    T: Scalar,
    G: FnMut(T) -> Result<T>,
{
    let cgold = T::lit(0.381_966_011_250_105_1);
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let zeps = T::epsilon() * T::lit(1e-3);
    let tol = tol.max(T::epsilon().sqrt() * T::lit(0.5));
    let (mut x, mut w, mut v) = (x0, x0, x0);
    let (mut fx, mut fw, mut fv) = (g0, g0, g0);
    let mut d = T::zero();
    let mut e = T::zero();
    for _ in 0..200 {
        let xm = half * (a + b);
        let tol1 = tol * x.abs() + zeps;
        let tol2 = two * tol1;
        if (x - xm).abs() <= tol2 - half * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = two * (q - r);
            if q > T::zero() {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            e = d;
            if !(p.abs() >= (half * q * etemp).abs() || p <= q * (a - x) || p >= q * (b - x)) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = cgold * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = g(u)?;
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Ok((x, fx))
}
