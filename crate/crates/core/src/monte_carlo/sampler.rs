//! Inverse-CDF sampling of one delay: solve `P(τ) = u`.

use crate::dynamics::delay_eval;
use crate::error::{invalid, Error, Result};
use crate::laplace::delay_moments;
use crate::AtomDriveParams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerTolerance {
    /// Stop once `|P(τ) - u|` is below this.
    pub residual: f64,
    pub max_iterations: usize,
}

impl Default for SamplerTolerance {
    fn default() -> Self {
        Self {
            residual: 1e-12,
            max_iterations: 200,
        }
    }
}

/// The delay `τ` with `P(τ) = u`, for `u` strictly inside (0, 1).
pub fn sample_delay(params: &AtomDriveParams, u: f64) -> Result<f64> {
    params.require_drive("delay sampling")?;
    let mean = delay_moments(params)?.mean_delay;
    sample_delay_with(params, u, mean, SamplerTolerance::default())
}

/// As [`sample_delay`] with the mean delay precomputed.
///
/// The bracket grows by doubling from `mean_delay` until `P < u`, then a
/// Newton step on `P - u` (slope `-K`) is taken whenever it stays inside the
/// bracket, with bisection otherwise. `K` has isolated zeros at strong
/// resonant drive where plain Newton would stall.
pub fn sample_delay_with(
    params: &AtomDriveParams,
    u: f64,
    mean_delay: f64,
    tol: SamplerTolerance,
) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(invalid("u", format!("must lie in (0, 1), got {u}")));
    }
    let mut lo = 0.0;
    let mut hi = mean_delay;
    let mut at_hi = delay_eval(params, hi);
    let mut doublings = 0;
    while at_hi.survival_p >= u {
        lo = hi;
        hi *= 2.0;
        at_hi = delay_eval(params, hi);
        doublings += 1;
        if doublings > 2000 {
            return Err(Error::NoConvergence {
                iterations: doublings,
                target: u,
            });
        }
    }

    let mut tau = if lo == 0.0 { 0.5 * hi } else { 0.5 * (lo + hi) };
    for _ in 0..tol.max_iterations {
        let e = delay_eval(params, tau);
        let g = e.survival_p - u;
        if g.abs() < tol.residual {
            return Ok(tau);
        }
        if g > 0.0 {
            lo = tau;
        } else {
            hi = tau;
        }
        let newton = if e.density_k > 0.0 {
            tau + g / e.density_k
        } else {
            f64::NAN
        };
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == tau || hi - lo <= 4.0 * f64::EPSILON * hi {
            // bracket collapsed at machine resolution
            return Ok(next);
        }
        tau = next;
    }
    Err(Error::NoConvergence {
        iterations: tol.max_iterations,
        target: u,
    })
}
