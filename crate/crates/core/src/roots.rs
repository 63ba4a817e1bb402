//! Bracketed scalar root finding: bisection down to a coarse width, then a
//! secant polish kept inside the bracket.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    /// Absolute width at which the secant polish takes over.
    pub coarse_width: f64,
    /// Absolute tolerance on the root.
    pub xtol: f64,
    /// Stop once `|f| <= ftol`.
    pub ftol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            coarse_width: 1e-6,
            xtol: 1e-14,
            ftol: 0.0,
            max_iter: 200,
        }
    }
}

/// Root of `f` on `[lo, hi]`. The first bisection split is taken at `seed`
/// when it lies strictly inside the bracket.
pub fn find_root<F>(mut f: F, lo: f64, hi: f64, seed: Option<f64>, opts: RootOptions) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoBracket { lo: a, hi: b });
    }

    let mut iter = 0;
    let mut split = seed.filter(|s| *s > a && *s < b);
    while b - a > opts.coarse_width {
        iter += 1;
        if iter > opts.max_iter {
            return Err(Error::NoConvergence { iterations: iter });
        }
        let m = split.take().unwrap_or(0.5 * (a + b));
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }

    // secant polish, falling back to bisection whenever the step leaves the bracket
    let (mut x0, mut f0) = (a, fa);
    let (mut x1, mut f1) = (b, fb);
    loop {
        iter += 1;
        if iter > opts.max_iter {
            return Err(Error::NoConvergence { iterations: iter });
        }
        let mut x = x1 - f1 * (x1 - x0) / (f1 - f0);
        if !(x > a && x < b) || !x.is_finite() {
            x = 0.5 * (a + b);
        }
        let fx = f(x)?;
        if fx.abs() <= opts.ftol || fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
        }
        let step = (x - x1).abs();
        x0 = x1;
        f0 = f1;
        x1 = x;
        f1 = fx;
        if step <= opts.xtol || b - a <= opts.xtol {
            return Ok(x);
        }
    }
}
