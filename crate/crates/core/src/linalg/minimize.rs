use super::{Interval, ScalarOutput};
use crate::error::{Error, Result};

/// Location and value of a minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
}

/// Knobs for [`minimize_scalar_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions {
    /// Coarse grid size, endpoints included.
    pub grid_points: usize,
    /// Bracket width at which golden-section stops (in the search coordinate).
    pub tol: f64,
    /// Search in `ln x` instead of `x`. Requires a positive domain.
    pub log_scale: bool,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self {
            grid_points: 129,
            tol: 1e-10,
            log_scale: false,
        }
    }
}

impl MinimizeOptions {
    pub fn log() -> Self {
        Self {
            log_scale: true,
            ..Self::default()
        }
    }

    pub fn with_grid(mut self, n: usize) -> Self {
        self.grid_points = n;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

/// Minimizes `f` over `domain` with the default 129-point grid and `tol`.
pub fn minimize_scalar<F, R>(f: F, domain: Interval, tol: f64) -> Result<Minimum>
where
    F: FnMut(f64) -> R,
    R: ScalarOutput,
{
    minimize_scalar_with(f, domain, MinimizeOptions::default().with_tol(tol))
}

/// Coarse grid scan followed by golden-section on the cell pair around the
/// best grid point. The better of the grid winner and the refined point is
/// returned, so the result is never worse than the grid.
pub fn minimize_scalar_with<F, R>(mut f: F, domain: Interval, opts: MinimizeOptions) -> Result<Minimum>
where
    F: FnMut(f64) -> R,
    R: ScalarOutput,
{
    if opts.grid_points < 3 {
        return Err(Error::InvalidInput("minimizer grid needs at least 3 points".into()));
    }
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "minimizer tolerance must be positive, got {}",
            opts.tol
        )));
    }
    let (to_x, search): (fn(f64) -> f64, Interval) = if opts.log_scale {
        if domain.lo() <= 0.0 {
            return Err(Error::InvalidInput("log-scaled search needs a positive domain".into()));
        }
        (f64::exp, Interval::new(domain.lo().ln(), domain.hi().ln())?)
    } else {
        (std::convert::identity, domain)
    };
    let mut eval = |u: f64| -> Result<(f64, f64)> {
        let x = if opts.log_scale {
            to_x(u).clamp(domain.lo(), domain.hi())
        } else {
            u
        };
        let y = f(x).into_result()?;
        if !y.is_finite() {
            return Err(Error::InvalidInput(format!("objective is not finite at x = {x}: {y}")));
        }
        Ok((x, y))
    };

    let grid = search.linspace(opts.grid_points);
    let mut best_k = 0;
    let mut best = eval(grid[0])?;
    for (k, &u) in grid.iter().enumerate().skip(1) {
        let cand = eval(u)?;
        if cand.1 < best.1 {
            best = cand;
            best_k = k;
        }
    }
    let lo = grid[best_k.saturating_sub(1)];
    let hi = grid[(best_k + 1).min(grid.len() - 1)];
    let refined = golden_search(&mut eval, lo, hi, opts.tol)?;
    let (x, value) = if refined.1 < best.1 { refined } else { best };
    Ok(Minimum { x, value })
}

/// Golden-section search on `[lo, hi]` down to bracket width `tol`.
pub fn golden_section<F, R>(mut f: F, bracket: Interval, tol: f64) -> Result<Minimum>
where
    F: FnMut(f64) -> R,
    R: ScalarOutput,
{
    let mut eval = |x: f64| -> Result<(f64, f64)> {
        let y = f(x).into_result()?;
        if !y.is_finite() {
            return Err(Error::InvalidInput(format!("objective is not finite at x = {x}: {y}")));
        }
        Ok((x, y))
    };
    let (x, value) = golden_search(&mut eval, bracket.lo(), bracket.hi(), tol)?;
    Ok(Minimum { x, value })
}

fn golden_search(
    eval: &mut impl FnMut(f64) -> Result<(f64, f64)>,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    let mut iters = 0;
    while (b - a).abs() > tol && iters < 200 {
        if fc.1 <= fd.1 {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d)?;
        }
        iters += 1;
    }
    Ok(if fc.1 <= fd.1 { fc } else { fd })
}
