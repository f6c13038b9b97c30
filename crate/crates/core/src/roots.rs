//! Bracketed bisection shared by the equilibrium, efficiency and policy solvers.

use crate::error::{ModelError, Result};

/// Termination settings for [`bisect`].
#[derive(Debug, Clone, Copy)]
pub struct Bisection {
    /// Relative tolerance on the width of the final bracket.
    pub rtol: f64,
    pub max_iter: usize,
}

impl Default for Bisection {
    fn default() -> Self {
        Bisection {
            rtol: 1e-12,
            max_iter: 200,
        }
    }
}

/// Outcome of a bisection run.
#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub x: f64,
    /// Final bracket `[lo, hi]`, which contains a sign change.
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
}

/// Finds a root of `f` on `[lo, hi]` by bisection.
///
/// `f(lo)` and `f(hi)` must have opposite signs (or one of them is zero).
/// Iteration stops when the bracket is narrower than `rtol * |mid|`, when it
/// can no longer be split in floating point, or after `max_iter` halvings.
/// The returned `x` is the secant point of the final bracket, which lies
/// inside it.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, opts: Bisection) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    if !(lo < hi) {
        return Err(ModelError::Numerical(format!("empty bracket [{lo}, {hi}]")));
    }
    let (mut lo, mut hi) = (lo, hi);
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if !f_lo.is_finite() || !f_hi.is_finite() {
        return Err(ModelError::Numerical(format!(
            "non-finite value at bracket ends: f({lo}) = {f_lo}, f({hi}) = {f_hi}"
        )));
    }
    if f_lo == 0.0 {
        return Ok(Root {
            x: lo,
            lo,
            hi: lo,
            iterations: 0,
        });
    }
    if f_hi == 0.0 {
        return Ok(Root {
            x: hi,
            lo: hi,
            hi,
            iterations: 0,
        });
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(ModelError::Numerical(format!(
            "no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}"
        )));
    }

    let mut iterations = 0;
    while iterations < opts.max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= opts.rtol * mid.abs() || mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let f_mid = f(mid);
        if !f_mid.is_finite() {
            return Err(ModelError::Numerical(format!(
                "non-finite value f({mid}) = {f_mid}"
            )));
        }
        if f_mid == 0.0 {
            return Ok(Root {
                x: mid,
                lo: mid,
                hi: mid,
                iterations,
            });
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }

    let x = (lo - f_lo * (hi - lo) / (f_hi - f_lo)).clamp(lo, hi);
    Ok(Root {
        x,
        lo,
        hi,
        iterations,
    })
}
