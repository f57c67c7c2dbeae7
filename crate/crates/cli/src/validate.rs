//! Built-in invariant and oracle suite behind `resfluor validate`.
//!
//! Every check measures one error against a fixed tolerance. A check may be
//! run with a `bump` added to the library-side quantity, which lets the
//! harness demonstrate that it notices a wrong answer.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use resfluor::correlation::{
    j_convolution_oracle, j_of_t, j_perturbative, j_resonant, laplace_j, laplace_j_from_k,
    mean_intensity, noise_spectrum, pole_decomposition,
};
use resfluor::dynamics::{
    amplitudes_closed_form, decay_rate, delay_density, survival, OdeTrajectory,
};
use resfluor::grid::UniformGrid;
use resfluor::laplace::{
    delay_moments, laplace_k, laplace_k_numeric_oracle, moments_from_logderivative_oracle,
};
use resfluor::monte_carlo::{generate_stream, ks_test, sample_delay};
use resfluor::quadrature::{integrate_real, Tolerance};
use resfluor::{AtomDriveParams, Execution, Result};
use serde::Serialize;

use crate::output::Metadata;

pub struct Check {
    pub name: &'static str,
    pub description: &'static str,
    pub tolerance: f64,
    run: fn(f64) -> Result<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub description: &'static str,
    /// `null` when the computation itself failed.
    pub measured_error: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub metadata: Metadata,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckOutcome>,
}

/// Size of the perturbation used by `--inject-fault`.
pub const FAULT_BUMP: f64 = 1e-2;

fn p(gamma: f64, omega: f64, delta: f64) -> AtomDriveParams {
    AtomDriveParams::new(gamma, omega, delta).expect("hard-coded parameters are valid")
}

/// 5 drives × 5 detunings.
pub fn parameter_grid() -> Vec<AtomDriveParams> {
    let mut out = Vec::with_capacity(25);
    for o in [0.3, 1.0, SQRT_2, 2.8, 5.0] {
        for d in [0.0, 1.0, -1.0, -2.2, 3.0] {
            out.push(p(1.0, o, d));
        }
    }
    out
}

/// Parameter sets of the delay, correlation and detuned-correlation figures.
pub fn figure_sets() -> Vec<AtomDriveParams> {
    vec![
        p(1.0, SQRT_2, 0.0),
        p(1.0, SQRT_2 / 2.0, 0.0),
        p(1.0, 2.0 * SQRT_2, 0.0),
        p(1.0, 2.2, 0.0),
        p(1.0, 4.4, 0.0),
        p(1.0, 2.8, -2.2),
        p(1.0, 4.4, -3.4),
    ]
}

fn s_points() -> Vec<Complex64> {
    [(0.1, 0.0), (0.5, 2.0), (1.0, -1.0), (2.0, 0.3), (5.0, -4.0)]
        .into_iter()
        .map(|(re, im)| Complex64::new(re, im))
        .collect()
}

fn max_of(values: impl IntoIterator<Item = Result<f64>>) -> Result<f64> {
    let mut worst = 0.0f64;
    for v in values {
        let v = v?;
        // NaN must fail the comparison downstream, so keep it
        worst = if v.is_nan() { f64::NAN } else { worst.max(v) };
    }
    Ok(worst)
}

fn optimal_q(bump: f64) -> Result<f64> {
    Ok((delay_moments(&p(1.0, SQRT_2, 0.0))?.mandel_q + bump + 0.75).abs())
}

fn geometric_pair(bump: f64) -> Result<f64> {
    max_of(
        [SQRT_2 / 2.0, 2.0 * SQRT_2].map(|o| {
            Ok((1.0 + delay_moments(&p(1.0, o, 0.0))?.mandel_q + bump - 13.0 / 25.0).abs())
        }),
    )
}

fn sign_boundary(bump: f64) -> Result<f64> {
    max_of(
        [0.5, SQRT_2, 5.0]
            .map(|o| Ok((delay_moments(&p(1.0, o, 3f64.sqrt()))?.mandel_q + bump).abs())),
    )
}

fn laplace_normalization(bump: f64) -> Result<f64> {
    max_of(parameter_grid().iter().map(|q| {
        let k0 = laplace_k(q, Complex64::new(0.0, 0.0))?;
        Ok((k0 + bump - 1.0).norm())
    }))
}

fn intensity_delay_product(bump: f64) -> Result<f64> {
    max_of(
        parameter_grid()
            .iter()
            .map(|q| Ok((mean_intensity(q)? * delay_moments(q)?.mean_delay + bump - 1.0).abs())),
    )
}

fn spectrum_zero(bump: f64) -> Result<f64> {
    max_of(
        parameter_grid()
            .iter()
            .map(|q| Ok((noise_spectrum(q, 0.0)?.0 + bump - delay_moments(q)?.mandel_q).abs())),
    )
}

fn renewal_identity(bump: f64) -> Result<f64> {
    let mut errs = Vec::new();
    for q in parameter_grid() {
        for s in s_points() {
            let direct = laplace_j(&q, s)?;
            let renewal = laplace_j_from_k(&q, s)?;
            errs.push(Ok((direct + bump - renewal).norm() / direct.norm().max(1.0)));
        }
    }
    max_of(errs)
}

fn pole_reconstruction(bump: f64) -> Result<f64> {
    let mut errs = Vec::new();
    for q in figure_sets() {
        let dec = pole_decomposition(&q)?;
        for i in 0..20 {
            let s = Complex64::new(0.05 + 0.3 * i as f64, 2.0 * (0.7 * i as f64).sin());
            let exact = laplace_j(&q, s)?;
            errs.push(Ok((dec.laplace_j(s) + bump - exact).norm() / exact.norm()));
        }
    }
    max_of(errs)
}

fn amplitudes_vs_ode(bump: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for q in figure_sets() {
        let mut ode = OdeTrajectory::new(q);
        for i in 0..=200 {
            let t = 0.1 * i as f64;
            ode.advance_to(t, 2e-3);
            let cf = amplitudes_closed_form(&q, t);
            let s = ode.state();
            worst = worst
                .max((cf.a_ground + bump - s.a_ground).norm())
                .max((cf.b_excited - s.b_excited).norm());
        }
    }
    Ok(worst)
}

fn laplace_vs_quadrature(bump: f64) -> Result<f64> {
    let mut errs = Vec::new();
    for q in figure_sets() {
        for s in s_points() {
            errs.push(Ok((laplace_k(&q, s)? + bump
                - laplace_k_numeric_oracle(&q, s)?)
            .norm()));
        }
    }
    max_of(errs)
}

fn moments_vs_logderivative(bump: f64) -> Result<f64> {
    max_of(parameter_grid().iter().map(|q| {
        let exact = delay_moments(q)?;
        let fd = moments_from_logderivative_oracle(q)?;
        let mean = ((exact.mean_delay + bump - fd.mean_delay) / exact.mean_delay).abs();
        let var = ((exact.delay_variance - fd.delay_variance) / exact.delay_variance).abs();
        Ok(mean.max(var))
    }))
}

fn density_normalization(bump: f64) -> Result<f64> {
    let mut errs = Vec::new();
    for o in [0.5, 1.0, SQRT_2, 5.0] {
        for d in [0.0, 1.0, -3.0] {
            let q = p(1.0, o, d);
            let mut t_max = 10.0 / decay_rate(&q);
            while survival(&q, t_max) > 1e-13 {
                t_max *= 1.5;
            }
            let panels = (t_max * o.max(d.abs()).max(1.0)) as usize + 1;
            let tol = Tolerance {
                abs: 1e-13,
                rel: 1e-13,
                max_subdivisions: 200_000,
            };
            let v = integrate_real(|t| delay_density(&q, t), 0.0, t_max, panels, tol)?;
            errs.push(Ok((v + bump - 1.0).abs()));
        }
    }
    max_of(errs)
}

fn correlation_vs_convolution(bump: f64) -> Result<f64> {
    let grid = UniformGrid::from_step(1e-3, 4001)?;
    let mut worst = 0.0f64;
    for q in figure_sets() {
        let conv = j_convolution_oracle(&q, &grid, 12, Execution::default())?;
        let dec = pole_decomposition(&q)?;
        for (&t, &v) in conv.lags.iter().zip(&conv.values) {
            worst = worst.max((dec.raw_j(t) + bump - v).abs());
        }
    }
    Ok(worst)
}

fn resonant_closed_form(bump: f64) -> Result<f64> {
    let mut errs = Vec::new();
    for o in [2.2, 4.4] {
        let q = p(1.0, o, 0.0);
        for i in 0..=500 {
            let t = 0.01 * i as f64;
            errs.push(Ok((j_of_t(&q, t)? + bump - j_resonant(&q, t)?).abs()));
        }
    }
    max_of(errs)
}

fn perturbative_limit(bump: f64) -> Result<f64> {
    let mut errs = Vec::new();
    for d in [0.0, 2.0] {
        let q = p(1.0, 0.01, d);
        for i in 0..=1000 {
            let t = 0.01 * i as f64;
            errs.push(Ok((j_of_t(&q, t)? + bump - j_perturbative(&q, t)).abs()));
        }
    }
    max_of(errs)
}

fn spectrum_low(bump: f64) -> Result<f64> {
    Ok((1.0 + noise_spectrum(&p(1.0, SQRT_2, 0.0), 0.0)?.0 + bump - 0.25).abs())
}

fn spectrum_high(bump: f64) -> Result<f64> {
    Ok((noise_spectrum(&p(1.0, SQRT_2, 0.0), 100.0)?.0 + bump).abs())
}

fn spectrum_bounds(bump: f64) -> Result<f64> {
    // distance outside [0, 2]; the margin is O(1), so the fault shifts by 1
    let shift = bump * 1e2;
    let mut worst = 0.0f64;
    for q in parameter_grid() {
        for i in 0..=200 {
            let w = 10f64.powf(-3.0 + 6.0 * i as f64 / 200.0);
            let one_plus = 1.0 + noise_spectrum(&q, w)?.0 - shift;
            worst = worst.max(-one_plus).max(one_plus - 2.0);
        }
    }
    Ok(worst.max(0.0))
}

fn inverse_cdf(bump: f64) -> Result<f64> {
    let mut errs = Vec::new();
    for q in [p(1.0, SQRT_2, 0.0), p(1.0, 0.4, 1.0), p(1.0, 4.4, -3.4)] {
        for i in 0..=100 {
            let u = 1e-6 + (1.0 - 2e-6) * i as f64 / 100.0;
            let tau = sample_delay(&q, u)?;
            errs.push(Ok((survival(&q, tau) + bump - u).abs()));
        }
    }
    max_of(errs)
}

/// KS distance relative to the 0.1 % critical value, worst over the
/// delay-figure drives. The fault stretches the simulated times by 10 %.
fn ks_delays(bump: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    for (i, o) in [SQRT_2, SQRT_2 / 2.0, 2.0 * SQRT_2].into_iter().enumerate() {
        let mut stream = generate_stream(&p(1.0, o, 0.0), 10_001, 1000 + i as u64)?;
        let stretch = 1.0 + 10.0 * bump;
        stream.times.iter_mut().for_each(|t| *t *= stretch);
        let ks = ks_test(&stream, 1e-3)?;
        worst = worst.max(ks.statistic / ks.critical_value);
    }
    Ok(worst)
}

pub fn checks() -> Vec<Check> {
    vec![
        Check {
            name: "optimal_mandel_q",
            description: "Q = -3/4 at Ω = √2γ, δ = 0",
            tolerance: 1e-12,
            run: optimal_q,
        },
        Check {
            name: "geometric_pair",
            description: "1+Q = 13/25 at Ω = Ω_opt/2 and 2Ω_opt",
            tolerance: 1e-12,
            run: geometric_pair,
        },
        Check {
            name: "q_sign_boundary",
            description: "Q = 0 at δ = √3γ for Ω ∈ {0.5, √2, 5}γ",
            tolerance: 1e-12,
            run: sign_boundary,
        },
        Check {
            name: "laplace_normalization",
            description: "K̃(0) = 1 on the 25-point grid",
            tolerance: 1e-12,
            run: laplace_normalization,
        },
        Check {
            name: "intensity_delay_product",
            description: "Ī·τ̄ = 1 on the 25-point grid",
            tolerance: 1e-12,
            run: intensity_delay_product,
        },
        Check {
            name: "spectrum_zero_equals_q",
            description: "Q(ω=0) equals the Mandel factor on the 25-point grid",
            tolerance: 1e-12,
            run: spectrum_zero,
        },
        Check {
            name: "renewal_identity",
            description: "J̃ = K̃/(1-K̃) on the 25-point grid, relative",
            tolerance: 1e-12,
            run: renewal_identity,
        },
        Check {
            name: "pole_reconstruction",
            description: "Ī/s + Σρ/(s+r) rebuilds J̃ at 20 points, relative",
            tolerance: 1e-9,
            run: pole_reconstruction,
        },
        Check {
            name: "amplitudes_vs_ode",
            description: "closed-form amplitudes vs RK4 on τ ∈ [0, 20/γ]",
            tolerance: 1e-8,
            run: amplitudes_vs_ode,
        },
        Check {
            name: "laplace_vs_quadrature",
            description: "rational K̃(s) vs adaptive quadrature of e^{-sτ}K",
            tolerance: 1e-8,
            run: laplace_vs_quadrature,
        },
        Check {
            name: "moments_vs_logderivative",
            description: "closed-form τ̄, Δτ² vs finite differences of ln K̃, relative",
            tolerance: 1e-6,
            run: moments_vs_logderivative,
        },
        Check {
            name: "density_normalization",
            description: "∫K dτ = 1 by adaptive quadrature",
            tolerance: 1e-9,
            run: density_normalization,
        },
        Check {
            name: "correlation_vs_convolution",
            description: "pole-sum J(t) vs 12-term convolution series on [0, 4/γ]",
            tolerance: 1e-4,
            run: correlation_vs_convolution,
        },
        Check {
            name: "resonant_closed_form",
            description: "j(t) equals j0(t) at Ω ∈ {2.2, 4.4}γ, δ = 0",
            tolerance: 1e-10,
            run: resonant_closed_form,
        },
        Check {
            name: "perturbative_limit",
            description: "j(t) equals j_pert(t) at Ω = 0.01γ, δ ∈ {0, 2γ}",
            tolerance: 1e-4,
            run: perturbative_limit,
        },
        Check {
            name: "spectrum_zero_frequency",
            description: "1+Q(0) = 1/4 at the optimal drive",
            tolerance: 1e-12,
            run: spectrum_low,
        },
        Check {
            name: "spectrum_high_frequency",
            description: "1+Q(100γ) = 1 at the optimal drive",
            tolerance: 1e-3,
            run: spectrum_high,
        },
        Check {
            name: "spectrum_bounds",
            description: "1+Q(ω) stays in [0, 2]",
            tolerance: 1e-12,
            run: spectrum_bounds,
        },
        Check {
            name: "inverse_cdf",
            description: "P(sample_delay(u)) = u",
            tolerance: 1e-10,
            run: inverse_cdf,
        },
        Check {
            name: "ks_delays",
            description: "KS distance / 0.1% critical value for 10⁴ simulated delays",
            tolerance: 1.0,
            run: ks_delays,
        },
    ]
}

/// Runs every check; `fault` names one to perturb.
pub fn run_checks(fault: Option<&str>) -> Vec<CheckOutcome> {
    checks()
        .into_iter()
        .map(|c| {
            let bump = if fault == Some(c.name) {
                FAULT_BUMP
            } else {
                0.0
            };
            let (measured_error, error) = match (c.run)(bump) {
                Ok(v) => (Some(v), None),
                Err(e) => (None, Some(e.to_string())),
            };
            let pass = measured_error.is_some_and(|v| v <= c.tolerance);
            CheckOutcome {
                name: c.name,
                description: c.description,
                measured_error,
                tolerance: c.tolerance,
                pass,
                error,
            }
        })
        .collect()
}

pub fn report(fault: Option<&str>) -> Report {
    let checks = run_checks(fault);
    let passed = checks.iter().filter(|c| c.pass).count();
    Report {
        metadata: Metadata::new("validate", None),
        passed,
        failed: checks.len() - passed,
        checks,
    }
}
