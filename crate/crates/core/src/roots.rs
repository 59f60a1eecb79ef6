//! Bracketing root finder used by every solver.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Root {
    pub z: f64,
    pub iterations: usize,
}

/// Bisection on `[lo, hi]` for a function that changes sign across the
/// bracket. `f(lo)` and `f(hi)` may be zero; a non-strict bracket is the
/// caller's problem. Stops when the bracket is narrower than
/// `rel_tol * max(|lo|, |hi|, 1e-300)`.
pub(crate) fn bisect<F>(
    what: &'static str,
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    rel_tol: f64,
    max_iter: usize,
) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let f_lo = f(lo)?;
    if f_lo == 0.0 {
        return Ok(Root {
            z: lo,
            iterations: 0,
        });
    }
    let f_hi = f(hi)?;
    if f_hi == 0.0 {
        return Ok(Root {
            z: hi,
            iterations: 0,
        });
    }
    let lo_positive = f_lo > 0.0;
    for it in 1..=max_iter {
        let mid = 0.5 * (lo + hi);
        let width = hi - lo;
        if width <= rel_tol * lo.abs().max(hi.abs()).max(1e-300) || mid <= lo || mid >= hi {
            return Ok(Root {
                z: mid,
                iterations: it,
            });
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(Root {
                z: mid,
                iterations: it,
            });
        }
        if (fm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence {
        what,
        iterations: max_iter,
        width: hi - lo,
    })
}
