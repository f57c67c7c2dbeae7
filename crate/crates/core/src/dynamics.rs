//! Reversible evolution inside one dressed-atom multiplicity.
//!
//! After each emission the atom restarts in `|g,n⟩`. The amplitudes
//! `a` (ground) and `b` (excited) obey
//!
//! ```text
//! a' = -i(Ω/2) b
//! b' = -i(Ω/2) a - (γ - iδ) b
//! ```
//!
//! whose closed-form solution gives the survival probability
//! `P = |a|² + |b|²` and the delay density `K = 2γ|b|² = -P'`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::exec::Execution;
use crate::AtomDriveParams;

/// Below this `|χτ/2|` the hyperbolic functions are replaced by their series.
pub const SERIES_THRESHOLD: f64 = 1e-3;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplitudePair {
    pub a_ground: Complex64,
    pub b_excited: Complex64,
    pub tau: f64,
}

impl AmplitudePair {
    pub fn populations(&self) -> (f64, f64) {
        (self.a_ground.norm_sqr(), self.b_excited.norm_sqr())
    }
}

/// The delay law evaluated at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DelayPointEval {
    pub tau: f64,
    /// `P(τ)`: probability that no photon has been emitted yet.
    pub survival_p: f64,
    /// `K(τ)`: probability density of the next emission.
    pub density_k: f64,
    /// `λ(τ) = K/P`.
    pub intensity_lambda: f64,
    /// `Λ(τ) = -ln P`.
    pub cumulative_lambda: f64,
}

/// `χ = √((γ - iδ)² - Ω²)`, principal branch.
///
/// Every amplitude formula is even in `χ`, so the branch does not matter.
pub fn complex_chi(params: &AtomDriveParams) -> Complex64 {
    let w = params.complex_damping();
    (w * w - params.omega * params.omega).sqrt()
}

/// Amplitudes factored as `a = â·e^{scale}`, `b = b̂·e^{scale}` with
/// `|â|, |b̂| = O(1)`, so long delays never overflow or underflow the
/// hyperbolic terms.
#[derive(Debug, Clone, Copy)]
struct ScaledAmplitudes {
    a: Complex64,
    b: Complex64,
    log_scale: f64,
}

fn scaled_amplitudes(params: &AtomDriveParams, tau: f64) -> ScaledAmplitudes {
    let w = params.complex_damping();
    let chi = complex_chi(params);
    let half = 0.5 * tau;
    let x = chi * half;

    if x.norm() < SERIES_THRESHOLD {
        // cosh x and sinh(x)/x to six terms
        let x2 = x * x;
        let mut cosh = Complex64::new(0.0, 0.0);
        let mut sinhc = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        let mut fact = 1.0;
        for k in 0..6 {
            let n = 2.0 * k as f64;
            if k > 0 {
                fact *= (n - 1.0) * n;
            }
            cosh += pow / fact;
            sinhc += pow / (fact * (n + 1.0));
            pow *= x2;
        }
        // e^{-(γ-iδ)τ/2} = e^{-γτ/2} e^{iδτ/2}
        let phase = Complex64::from_polar(1.0, params.delta * half);
        ScaledAmplitudes {
            a: (cosh + w * half * sinhc) * phase,
            b: -I * params.omega * half * sinhc * phase,
            log_scale: -params.gamma * half,
        }
    } else {
        let log_scale = (chi.re.abs() - params.gamma) * half;
        let grow = ((chi - w) * half - log_scale).exp();
        let decay = ((-chi - w) * half - log_scale).exp();
        let cosh = 0.5 * (grow + decay);
        let sinh = 0.5 * (grow - decay);
        ScaledAmplitudes {
            a: cosh + w / chi * sinh,
            b: -I * params.omega / chi * sinh,
            log_scale,
        }
    }
}

/// Closed-form amplitudes at delay `tau` after an emission.
pub fn amplitudes_closed_form(params: &AtomDriveParams, tau: f64) -> AmplitudePair {
    let s = scaled_amplitudes(params, tau);
    let f = s.log_scale.exp();
    AmplitudePair {
        a_ground: s.a * f,
        b_excited: s.b * f,
        tau,
    }
}

/// Fixed-step RK4 integration of the amplitude equations from `(1, 0)`.
///
/// Independent of the closed form; the last step is shortened to land on
/// `tau` exactly.
pub fn amplitudes_ode_oracle(
    params: &AtomDriveParams,
    tau: f64,
    step: f64,
) -> Result<AmplitudePair> {
    if !(step.is_finite() && step > 0.0) {
        return Err(invalid("step", format!("must be > 0, got {step}")));
    }
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(invalid("tau", format!("must be >= 0, got {tau}")));
    }
    let mut traj = OdeTrajectory::new(*params);
    traj.advance_to(tau, step);
    Ok(traj.state())
}

/// Incremental RK4 integrator, for sampling many delays along one run.
#[derive(Debug, Clone)]
pub struct OdeTrajectory {
    half_omega: Complex64,
    damping: Complex64,
    a: Complex64,
    b: Complex64,
    tau: f64,
}

impl OdeTrajectory {
    pub fn new(params: AtomDriveParams) -> Self {
        Self {
            half_omega: -I * (0.5 * params.omega),
            damping: params.complex_damping(),
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            tau: 0.0,
        }
    }

    fn rhs(&self, a: Complex64, b: Complex64) -> (Complex64, Complex64) {
        (self.half_omega * b, self.half_omega * a - self.damping * b)
    }

    fn rk4(&mut self, h: f64) {
        let (a, b) = (self.a, self.b);
        let (ka1, kb1) = self.rhs(a, b);
        let (ka2, kb2) = self.rhs(a + ka1 * (0.5 * h), b + kb1 * (0.5 * h));
        let (ka3, kb3) = self.rhs(a + ka2 * (0.5 * h), b + kb2 * (0.5 * h));
        let (ka4, kb4) = self.rhs(a + ka3 * h, b + kb3 * h);
        self.a += (ka1 + 2.0 * ka2 + 2.0 * ka3 + ka4) * (h / 6.0);
        self.b += (kb1 + 2.0 * kb2 + 2.0 * kb3 + kb4) * (h / 6.0);
    }

    /// Integrates forward to `tau` with steps of at most `step`.
    pub fn advance_to(&mut self, tau: f64, step: f64) {
        let remaining = tau - self.tau;
        if remaining <= 0.0 {
            return;
        }
        let n = (remaining / step).ceil().max(1.0) as usize;
        let h = remaining / n as f64;
        for _ in 0..n {
            self.rk4(h);
        }
        self.tau = tau;
    }

    pub fn state(&self) -> AmplitudePair {
        AmplitudePair {
            a_ground: self.a,
            b_excited: self.b,
            tau: self.tau,
        }
    }
}

/// `(|a|², |b|²)` at delay `tau`.
pub fn populations(params: &AtomDriveParams, tau: f64) -> (f64, f64) {
    amplitudes_closed_form(params, tau).populations()
}

/// `P`, `K`, `λ` and `Λ` at delay `tau`.
pub fn delay_eval(params: &AtomDriveParams, tau: f64) -> DelayPointEval {
    let s = scaled_amplitudes(params, tau);
    let pa = s.a.norm_sqr();
    let pb = s.b.norm_sqr();
    let scaled_total = pa + pb;
    let scale = (2.0 * s.log_scale).exp();
    let survival_p = scaled_total * scale;
    let intensity_lambda = if scaled_total > 0.0 {
        params.einstein_a() * pb / scaled_total
    } else {
        0.0
    };
    DelayPointEval {
        tau,
        survival_p,
        density_k: params.einstein_a() * pb * scale,
        intensity_lambda,
        cumulative_lambda: -2.0 * s.log_scale - scaled_total.ln(),
    }
}

pub fn survival(params: &AtomDriveParams, tau: f64) -> f64 {
    delay_eval(params, tau).survival_p
}

pub fn delay_density(params: &AtomDriveParams, tau: f64) -> f64 {
    delay_eval(params, tau).density_k
}

/// `delay_eval` over many delays.
pub fn delay_curve(params: &AtomDriveParams, taus: &[f64], exec: Execution) -> Vec<DelayPointEval> {
    exec.map_slice(taus, |&t| delay_eval(params, t))
}

/// Slowest exponential decay rate of `P(τ)` and `K(τ)`: `γ - |Re χ|`.
pub fn decay_rate(params: &AtomDriveParams) -> f64 {
    params.gamma - complex_chi(params).re.abs()
}
