//! Photon correlation and intensity noise spectrum.
//!
//! Summing the densities of the n-th next photon gives `J(t)`, with
//! `J̃ = K̃/(1-K̃) = (γ/s)·Ω²(s+γ)/D(s)` and the cubic
//!
//! ```text
//! D(s) = (s+2γ)((s+γ)²+δ²) + Ω²(s+γ)
//! ```
//!
//! Splitting off the `s = 0` pole leaves `ΔJ̃ = Σ ρ_m/(s+r_m)`, hence
//! `J(t) = Ī + Σ ρ_m e^{-r_m t}` for `t ≥ 0`.

use num_complex::Complex64;
use serde::Serialize;

use crate::cubic::MonicCubic;
use crate::dynamics::delay_density;
use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::grid::UniformGrid;
use crate::laplace::{delay_moments, laplace_k, POLE_TOLERANCE};
use crate::AtomDriveParams;

/// Roots closer than this (in units of γ) are treated as repeated. A double
/// root only splits to about `√ε` under rounding, so a discriminant that
/// vanishes within its own rounding error is also treated as repeated.
pub const DEGENERACY_TOLERANCE: f64 = 1e-8;

/// Below this `|Ϝt|` the resonant closed form switches to its series.
const RESONANT_SERIES_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// `J(t)`, a rate.
    RawJ,
    /// `j = J/Ī`, dimensionless.
    NormalizedJ,
    /// Smooth part `Ī·ΔJ(|t|)` of the intensity correlation.
    IntensityCorrelation,
}

/// A curve over non-negative lags.
///
/// With `even_extension` set, the curve stands for `f(|t|)` on the whole
/// axis. The Dirac weight of the intensity correlation is carried in
/// `delta_weight`, never binned.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationCurve {
    pub lags: Vec<f64>,
    pub values: Vec<f64>,
    pub normalization: Normalization,
    pub even_extension: bool,
    pub delta_weight: Option<f64>,
    /// Statistical one-sigma errors, for empirical curves.
    pub std_errors: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumCurve {
    pub omegas: Vec<f64>,
    pub q_values: Vec<f64>,
    pub s_values: Vec<f64>,
}

/// One exponential term `ρ e^{-r t}` of `ΔJ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pole {
    pub rate: Complex64,
    pub residue: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PoleDecomposition {
    pub params: AtomDriveParams,
    pub mean_intensity: f64,
    pub poles: [Pole; 3],
}

/// Coefficients of the monic cubic `D(s)`.
pub fn denominator_cubic(params: &AtomDriveParams) -> MonicCubic {
    let AtomDriveParams {
        gamma,
        omega,
        delta,
    } = *params;
    let (g2, d2, o2) = (gamma * gamma, delta * delta, omega * omega);
    MonicCubic {
        c2: 4.0 * gamma,
        c1: 5.0 * g2 + d2 + o2,
        c0: 2.0 * gamma * (g2 + d2) + o2 * gamma,
    }
}

fn denominator(params: &AtomDriveParams, s: Complex64) -> Complex64 {
    let AtomDriveParams {
        gamma,
        omega,
        delta,
    } = *params;
    let sg = s + gamma;
    (s + 2.0 * gamma) * (sg * sg + delta * delta) + omega * omega * sg
}

/// Rational form of `J̃(s)`.
pub fn laplace_j(params: &AtomDriveParams, s: Complex64) -> Result<Complex64> {
    let AtomDriveParams { gamma, omega, .. } = *params;
    let den = s * denominator(params, s);
    let num = gamma * omega * omega * (s + gamma);
    let scale =
        s.norm() * (s.norm() + 2.0 * gamma) * ((s.norm() + gamma).powi(2) + params.delta.powi(2));
    if den.norm() == 0.0 || den.norm() <= POLE_TOLERANCE * scale {
        return Err(Error::Pole { re: s.re, im: s.im });
    }
    Ok(num / den)
}

/// `J̃ = K̃/(1-K̃)` evaluated through `K̃`.
pub fn laplace_j_from_k(params: &AtomDriveParams, s: Complex64) -> Result<Complex64> {
    let k = laplace_k(params, s)?;
    let one_minus = 1.0 - k;
    if one_minus.norm() <= POLE_TOLERANCE {
        return Err(Error::Pole { re: s.re, im: s.im });
    }
    Ok(k / one_minus)
}

/// `Ī = γΩ²/(2(γ²+δ²)+Ω²)`, the reciprocal of the mean delay.
pub fn mean_intensity(params: &AtomDriveParams) -> Result<f64> {
    params.require_drive("mean intensity")?;
    let AtomDriveParams {
        gamma,
        omega,
        delta,
    } = *params;
    let o2 = omega * omega;
    Ok(gamma * o2 / (2.0 * (gamma * gamma + delta * delta) + o2))
}

/// Rational form of `ΔJ̃(s) = J̃(s) - Ī/s`, regular at the origin.
pub fn laplace_delta_j(params: &AtomDriveParams, s: Complex64) -> Result<Complex64> {
    let mean = mean_intensity(params)?;
    let AtomDriveParams { gamma, delta, .. } = *params;
    let s2g = s + 2.0 * gamma;
    let den = denominator(params, s);
    if den.norm() == 0.0 {
        return Err(Error::Pole { re: s.re, im: s.im });
    }
    Ok(mean * (gamma * gamma + delta * delta - s2g * s2g) / den)
}

/// Roots and residues of `ΔJ̃`.
pub fn pole_decomposition(params: &AtomDriveParams) -> Result<PoleDecomposition> {
    let mean = mean_intensity(params)?;
    let cubic = denominator_cubic(params);
    let roots = cubic.roots();
    let mut separation = f64::INFINITY;
    for i in 0..3 {
        for j in i + 1..3 {
            separation = separation.min((roots[i] - roots[j]).norm());
        }
    }
    if separation < DEGENERACY_TOLERANCE * params.gamma || !cubic.discriminant_is_resolved() {
        return Err(Error::DegenerateRoots {
            params: *params,
            separation,
        });
    }
    let AtomDriveParams { gamma, delta, .. } = *params;
    let poles = roots.map(|z| {
        let z2g = z + 2.0 * gamma;
        Pole {
            rate: -z,
            residue: mean * (gamma * gamma + delta * delta - z2g * z2g) / cubic.derivative(z),
        }
    });
    Ok(PoleDecomposition {
        params: *params,
        mean_intensity: mean,
        poles,
    })
}

impl PoleDecomposition {
    /// `ΔJ(t) = Σ ρ_m e^{-r_m t}` for `t ≥ 0`.
    pub fn delta_j(&self, t: f64) -> f64 {
        self.poles
            .iter()
            .map(|p| p.residue * (-p.rate * t).exp())
            .sum::<Complex64>()
            .re
    }

    /// Imaginary part left over in `ΔJ(t)`; zero up to rounding because the
    /// poles come in conjugate pairs.
    pub fn delta_j_imaginary(&self, t: f64) -> f64 {
        self.poles
            .iter()
            .map(|p| p.residue * (-p.rate * t).exp())
            .sum::<Complex64>()
            .im
    }

    pub fn raw_j(&self, t: f64) -> f64 {
        self.mean_intensity + self.delta_j(t)
    }

    /// `j(t) = J(t)/Ī`.
    pub fn j(&self, t: f64) -> f64 {
        1.0 + self.delta_j(t) / self.mean_intensity
    }

    /// `ΔJ̃(s)` rebuilt from the poles.
    pub fn laplace_delta_j(&self, s: Complex64) -> Complex64 {
        self.poles.iter().map(|p| p.residue / (s + p.rate)).sum()
    }

    /// `J̃(s) = Ī/s + ΔJ̃(s)` rebuilt from the poles.
    pub fn laplace_j(&self, s: Complex64) -> Complex64 {
        self.mean_intensity / s + self.laplace_delta_j(s)
    }

    pub fn j_curve(&self, lags: &[f64], exec: Execution) -> CorrelationCurve {
        CorrelationCurve {
            lags: lags.to_vec(),
            values: exec.map_slice(lags, |&t| self.j(t.abs())),
            normalization: Normalization::NormalizedJ,
            even_extension: false,
            delta_weight: None,
            std_errors: None,
        }
    }
}

/// Normalized correlation `j(t)` from the pole decomposition.
pub fn j_of_t(params: &AtomDriveParams, t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(invalid("t", format!("must be >= 0, got {t}")));
    }
    Ok(pole_decomposition(params)?.j(t))
}

/// `J = K₁ + K₂ + … + K_{n_max}` by repeated trapezoidal convolution of `K`
/// on a uniform grid starting at zero.
///
/// Truncating the series is accurate for `t` up to about `n_max·τ̄/3`.
pub fn j_convolution_oracle(
    params: &AtomDriveParams,
    grid: &UniformGrid,
    n_max: usize,
    exec: Execution,
) -> Result<CorrelationCurve> {
    if n_max == 0 {
        return Err(invalid("n_max", "must be >= 1"));
    }
    if grid.start != 0.0 {
        return Err(Error::Grid(format!(
            "convolution grid must start at 0, got {}",
            grid.start
        )));
    }
    let mean_delay = delay_moments(params)?.mean_delay;
    if grid.step > mean_delay / 50.0 {
        return Err(Error::Grid(format!(
            "step {} coarser than mean delay / 50 = {}",
            grid.step,
            mean_delay / 50.0
        )));
    }
    let h = grid.step;
    let k: Vec<f64> = (0..grid.len)
        .map(|i| delay_density(params, grid.point(i)))
        .collect();
    let mut total = k.clone();
    let mut current = k.clone();
    for _ in 1..n_max {
        let prev = current;
        current = exec.map_indexed(grid.len, |i| {
            if i == 0 {
                return 0.0;
            }
            let interior: f64 = (1..i).map(|j| k[j] * prev[i - j]).sum();
            h * (interior + 0.5 * (k[0] * prev[i] + k[i] * prev[0]))
        });
        for (t, c) in total.iter_mut().zip(&current) {
            *t += c;
        }
    }
    Ok(CorrelationCurve {
        lags: grid.points(),
        values: total,
        normalization: Normalization::RawJ,
        even_extension: false,
        delta_weight: None,
        std_errors: None,
    })
}

/// Intensity correlation split as `(Ī², Ī·ΔJ(|t|))`: the Dirac weight and
/// the smooth part, even in `t`.
pub fn intensity_correlation(params: &AtomDriveParams, t: f64) -> Result<(f64, f64)> {
    let dec = pole_decomposition(params)?;
    Ok(dec.intensity_correlation(t))
}

impl PoleDecomposition {
    pub fn intensity_correlation(&self, t: f64) -> (f64, f64) {
        let mean = self.mean_intensity;
        (mean * mean, mean * self.delta_j(t.abs()))
    }

    pub fn intensity_correlation_curve(&self, lags: &[f64]) -> CorrelationCurve {
        CorrelationCurve {
            lags: lags.to_vec(),
            values: lags
                .iter()
                .map(|&t| self.intensity_correlation(t).1)
                .collect(),
            normalization: Normalization::IntensityCorrelation,
            even_extension: true,
            delta_weight: Some(self.mean_intensity * self.mean_intensity),
            std_errors: None,
        }
    }
}

/// `Q(ω) = ΔJ̃(iω) + ΔJ̃(-iω)` and `S_I(ω) = Ī(1+Q(ω))`.
pub fn noise_spectrum(params: &AtomDriveParams, omega: f64) -> Result<(f64, f64)> {
    let mean = mean_intensity(params)?;
    // conjugate inputs give exactly conjugate outputs, so use |ω| for evenness
    let w = omega.abs();
    let q = (laplace_delta_j(params, Complex64::new(0.0, w))?
        + laplace_delta_j(params, Complex64::new(0.0, -w))?)
    .re;
    Ok((q, mean * (1.0 + q)))
}

pub fn spectrum_curve(
    params: &AtomDriveParams,
    omegas: &[f64],
    exec: Execution,
) -> Result<SpectrumCurve> {
    let points = exec.map_slice(omegas, |&w| noise_spectrum(params, w));
    let mut q_values = Vec::with_capacity(omegas.len());
    let mut s_values = Vec::with_capacity(omegas.len());
    for p in points {
        let (q, s) = p?;
        q_values.push(q);
        s_values.push(s);
    }
    Ok(SpectrumCurve {
        omegas: omegas.to_vec(),
        q_values,
        s_values,
    })
}

/// Resonant closed form
/// `j₀(t) = 1 - e^{-3γt/2}(cosh Ϝt + (3γ/2Ϝ) sinh Ϝt)`, `Ϝ² = γ²/4 - Ω²`.
pub fn j_resonant(params: &AtomDriveParams, t: f64) -> Result<f64> {
    if params.delta != 0.0 {
        return Err(invalid(
            "delta",
            format!("resonant form needs delta = 0, got {}", params.delta),
        ));
    }
    if t.is_nan() || t < 0.0 {
        return Err(invalid("t", format!("must be >= 0, got {t}")));
    }
    let g = params.gamma;
    let f2 = 0.25 * g * g - params.omega * params.omega;
    let x2 = f2 * t * t;
    let a = 1.5 * g;
    let envelope = if x2.abs() < RESONANT_SERIES_THRESHOLD * RESONANT_SERIES_THRESHOLD {
        // cosh and sinh(x)/x in powers of x² = Ϝ²t²
        let mut cosh = 0.0;
        let mut sinhc = 0.0;
        let mut pow = 1.0;
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
        (-a * t).exp() * (cosh + a * t * sinhc)
    } else if f2 > 0.0 {
        let f = f2.sqrt();
        let ratio = a / f;
        0.5 * ((1.0 + ratio) * ((f - a) * t).exp() + (1.0 - ratio) * (-(f + a) * t).exp())
    } else {
        let f = (-f2).sqrt();
        (-a * t).exp() * ((f * t).cos() + a / f * (f * t).sin())
    };
    Ok(1.0 - envelope)
}

/// Resonant mean intensity `γΩ²/(2γ²+Ω²)`.
pub fn mean_intensity_resonant(params: &AtomDriveParams) -> f64 {
    let o2 = params.omega * params.omega;
    params.gamma * o2 / (2.0 * params.gamma * params.gamma + o2)
}

/// Weak-drive form `|1 - e^{-(γ-iδ)t}|²`.
pub fn j_perturbative(params: &AtomDriveParams, t: f64) -> f64 {
    (1.0 - (-params.complex_damping() * t).exp()).norm_sqr()
}

/// Weak-drive mean intensity `γΩ²/(2(γ²+δ²))`.
pub fn mean_intensity_perturbative(params: &AtomDriveParams) -> f64 {
    let AtomDriveParams {
        gamma,
        omega,
        delta,
    } = *params;
    gamma * omega * omega / (2.0 * (gamma * gamma + delta * delta))
}
