//! Laplace transform of the delay density and the counting statistics it
//! implies.
//!
//! `K̃(s) = γΩ²(s+γ) / [s(s+2γ)((s+γ)²+δ²) + Ω²(s+γ)²]`, and the delay
//! moments follow from derivatives of `ln K̃` at `s = 0`. Long counting
//! windows see Gaussian statistics with `ΔN² = N̄(1+Q)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{complex_chi, decay_rate, delay_density};
use crate::error::{invalid, Error, Result};
use crate::quadrature::{self, Tolerance};
use crate::AtomDriveParams;

/// Relative modulus below which the denominator counts as vanishing.
pub const POLE_TOLERANCE: f64 = 1e-14;

/// Counting windows shorter than this many mean delays are flagged.
pub const ASYMPTOTIC_WINDOWS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayMoments {
    pub mean_delay: f64,
    pub delay_variance: f64,
    pub mandel_q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountingStats {
    pub window: f64,
    pub mean_count: f64,
    pub count_variance: f64,
    /// False when the window is shorter than `ASYMPTOTIC_WINDOWS` mean delays,
    /// where the Gaussian long-window result is not expected to hold.
    pub asymptotic_regime: bool,
}

impl CountingStats {
    pub fn implied_q(&self) -> f64 {
        self.count_variance / self.mean_count - 1.0
    }
}

/// Rational form of `K̃(s)`.
pub fn laplace_k(params: &AtomDriveParams, s: Complex64) -> Result<Complex64> {
    let AtomDriveParams {
        gamma,
        omega,
        delta,
    } = *params;
    let o2 = omega * omega;
    let sg = s + gamma;
    let free = s * (s + 2.0 * gamma) * (sg * sg + delta * delta);
    let driven = o2 * sg * sg;
    let den = free + driven;
    let scale = free.norm() + driven.norm();
    if den.norm() <= POLE_TOLERANCE * scale || den.norm() == 0.0 {
        return Err(Error::Pole { re: s.re, im: s.im });
    }
    Ok(gamma * o2 * sg / den)
}

/// `∫₀^∞ e^{-sτ} K(τ) dτ` by adaptive quadrature, truncated where the tail
/// bound drops under `1e-13`.
///
/// Requires `Re(s)` above minus the decay rate of `K`.
pub fn laplace_k_numeric_oracle(params: &AtomDriveParams, s: Complex64) -> Result<Complex64> {
    if params.omega == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let kappa = decay_rate(params);
    let rate = kappa + s.re;
    if rate.is_nan() || rate <= 0.0 {
        return Err(invalid(
            "s",
            format!(
                "Re(s) = {} must exceed -{kappa} for the integral to converge",
                s.re
            ),
        ));
    }
    let t_max = truncation_point(params, rate, 1e-13);
    let chi = complex_chi(params);
    let freq = [
        params.gamma,
        s.im.abs(),
        chi.norm(),
        params.delta.abs(),
        params.omega,
    ]
    .into_iter()
    .fold(0.0, f64::max);
    let panels = ((t_max * freq / 2.0).ceil() as usize).clamp(1, 100_000);
    let tol = Tolerance {
        abs: 1e-13,
        rel: 1e-13,
        ..Tolerance::default()
    };
    quadrature::integrate(
        |t| (-s * t).exp() * delay_density(params, t),
        0.0,
        t_max,
        panels,
        tol,
    )
    .map(|e| e.value)
}

/// Upper bound on `∫_T^∞ |e^{-sτ}K(τ)| dτ` falls below `tail` past the
/// returned `T`.
fn truncation_point(params: &AtomDriveParams, rate: f64, tail: f64) -> f64 {
    let chi = complex_chi(params).norm();
    let o2 = params.omega * params.omega;
    let a = params.einstein_a();
    let bound = |t: f64| {
        // |b|² ≤ (Ω/|χ|)² e^{-κτ}; near χ = 0 use |sinh z| ≤ |z| e^{|z|}
        let amp = if chi > 1e-3 * params.gamma {
            o2 / (chi * chi)
        } else {
            o2 * (0.5 * t).powi(2) * (chi * t).exp() * 2.0
        };
        a * amp * (-rate * t).exp() / rate
    };
    let mut t = 1.0 / rate;
    while bound(t) > tail {
        t *= 1.5;
    }
    t
}

/// Closed-form mean delay, delay variance and Mandel factor.
pub fn delay_moments(params: &AtomDriveParams) -> Result<DelayMoments> {
    params.require_drive("delay moments")?;
    let AtomDriveParams {
        gamma,
        omega,
        delta,
    } = *params;
    let (g2, d2, o2) = (gamma * gamma, delta * delta, omega * omega);
    let base = 2.0 * (g2 + d2) + o2;
    Ok(DelayMoments {
        mean_delay: base / (gamma * o2),
        delay_variance: (4.0 * (g2 + d2).powi(2) + 2.0 * (3.0 * d2 - g2) * o2 + o2 * o2)
            / (g2 * o2 * o2),
        mandel_q: 2.0 * (d2 - 3.0 * g2) * o2 / (base * base),
    })
}

/// Moments from Richardson-extrapolated central differences of `ln K̃` at
/// `s = 0`, step `1e-4·γ`. Kept as an independent check of
/// [`delay_moments`].
pub fn moments_from_logderivative_oracle(params: &AtomDriveParams) -> Result<DelayMoments> {
    params.require_drive("log-derivative moments")?;
    let ln_k = |s: f64| -> Result<f64> { Ok(laplace_k(params, Complex64::new(s, 0.0))?.re.ln()) };
    let h = 1e-4 * params.gamma;
    let f0 = ln_k(0.0)?;
    let d1 = |h: f64| -> Result<f64> { Ok((ln_k(h)? - ln_k(-h)?) / (2.0 * h)) };
    let d2 = |h: f64| -> Result<f64> { Ok((ln_k(h)? - 2.0 * f0 + ln_k(-h)?) / (h * h)) };
    let first = (4.0 * d1(0.5 * h)? - d1(h)?) / 3.0;
    let second = (4.0 * d2(0.5 * h)? - d2(h)?) / 3.0;
    let mean_delay = -first;
    let delay_variance = second;
    Ok(DelayMoments {
        mean_delay,
        delay_variance,
        mandel_q: delay_variance / (mean_delay * mean_delay) - 1.0,
    })
}

/// Long-window counting statistics: `N̄ = T/τ̄`, `ΔN² = N̄(1+Q)`.
pub fn counting_stats(params: &AtomDriveParams, window: f64) -> Result<CountingStats> {
    if !(window.is_finite() && window > 0.0) {
        return Err(invalid("window", format!("must be > 0, got {window}")));
    }
    let m = delay_moments(params)?;
    let mean_count = window / m.mean_delay;
    Ok(CountingStats {
        window,
        mean_count,
        count_variance: mean_count * (1.0 + m.mandel_q),
        asymptotic_regime: window >= ASYMPTOTIC_WINDOWS * m.mean_delay,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::SQRT_2;

    fn p(g: f64, o: f64, d: f64) -> AtomDriveParams {
        AtomDriveParams::new(g, o, d).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn normalized_at_zero() {
        for params in [p(1.0, SQRT_2, 0.0), p(0.5, 3.0, -2.0), p(2.0, 0.1, 4.0)] {
            let k0 = laplace_k(&params, c(0.0, 0.0)).unwrap();
            assert_relative_eq!(k0.re, 1.0, epsilon = 1e-15);
            assert_eq!(k0.im, 0.0);
        }
    }

    #[test]
    fn direct_substitution() {
        let v = laplace_k(&p(1.0, SQRT_2, 0.0), c(1.0, 0.0)).unwrap();
        assert_relative_eq!(v.re, 0.2, epsilon = 1e-15);
    }

    #[test]
    fn pole_reported() {
        // zero drive: the denominator vanishes at s = 0
        let r = laplace_k(&p(1.0, 0.0, 0.0), c(0.0, 0.0));
        assert!(matches!(r, Err(Error::Pole { .. })));
        // s = -2γ at Ω = 0 again a pole
        assert!(laplace_k(&p(1.0, 0.0, 0.0), c(-2.0, 0.0)).is_err());
    }

    #[test]
    fn quadrature_oracle_examples() {
        let opt = p(1.0, SQRT_2, 0.0);
        assert!((laplace_k_numeric_oracle(&opt, c(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-9);
        assert!((laplace_k_numeric_oracle(&opt, c(1.0, 0.0)).unwrap() - 0.2).norm() < 1e-8);
        for (params, s) in [(opt, c(2.0, 0.0)), (p(1.0, 2.0 * SQRT_2, 0.0), c(0.0, 1.0))] {
            let q = laplace_k_numeric_oracle(&params, s).unwrap();
            let r = laplace_k(&params, s).unwrap();
            assert!((q - r).norm() < 1e-8, "{q} vs {r}");
        }
    }

    #[test]
    fn oracle_rejects_divergent_s() {
        assert!(laplace_k_numeric_oracle(&p(1.0, SQRT_2, 0.0), c(-1.5, 0.0)).is_err());
    }

    #[test]
    fn moments_examples() {
        let m = delay_moments(&p(1.0, SQRT_2, 0.0)).unwrap();
        assert_relative_eq!(m.mandel_q, -0.75, epsilon = 1e-15);
        assert_relative_eq!(m.mean_delay, 2.0, epsilon = 1e-15);
        assert_relative_eq!(m.delay_variance, 1.0, epsilon = 1e-15);
        for o in [SQRT_2 / 2.0, 2.0 * SQRT_2] {
            let m = delay_moments(&p(1.0, o, 0.0)).unwrap();
            assert_relative_eq!(1.0 + m.mandel_q, 13.0 / 25.0, epsilon = 1e-15);
        }
        for o in [0.3, 1.0, 7.0] {
            let m = delay_moments(&p(1.0, o, 3f64.sqrt())).unwrap();
            assert!(m.mandel_q.abs() < 1e-15);
        }
        assert_eq!(
            delay_moments(&p(1.0, 0.0, 0.0)),
            Err(Error::ZeroRabi("delay moments"))
        );
    }

    #[test]
    fn q_is_ratio_of_moments() {
        let m = delay_moments(&p(1.7, 2.3, -0.4)).unwrap();
        assert_relative_eq!(
            m.mandel_q,
            m.delay_variance / m.mean_delay.powi(2) - 1.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn logderivative_oracle_examples() {
        let m = moments_from_logderivative_oracle(&p(1.0, SQRT_2, 0.0)).unwrap();
        assert!((m.mean_delay - 2.0).abs() < 1e-6);
        let m = moments_from_logderivative_oracle(&p(1.0, 1.0, 2.0)).unwrap();
        assert!((m.mean_delay - 11.0).abs() < 1e-6);
        let params = p(1.0, 5.0, -3.0);
        let o = moments_from_logderivative_oracle(&params).unwrap();
        let cf = delay_moments(&params).unwrap();
        assert!((o.mandel_q - cf.mandel_q).abs() < 1e-6);
    }

    #[test]
    fn counting_examples() {
        let s = counting_stats(&p(1.0, SQRT_2, 0.0), 200.0).unwrap();
        assert_relative_eq!(s.mean_count, 100.0, epsilon = 1e-12);
        assert_relative_eq!(s.count_variance, 25.0, epsilon = 1e-12);
        assert!(s.asymptotic_regime);
        let s = counting_stats(&p(1.0, SQRT_2, 3f64.sqrt()), 200.0).unwrap();
        assert_relative_eq!(s.count_variance, s.mean_count, max_relative = 1e-14);
        let s = counting_stats(&p(1.0, SQRT_2, 0.0), 4.0).unwrap();
        assert!(!s.asymptotic_regime);
        assert!(counting_stats(&p(1.0, SQRT_2, 0.0), 0.0).is_err());
        assert!(counting_stats(&p(1.0, 0.0, 0.0), 10.0).is_err());
    }
}
