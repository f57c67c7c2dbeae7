//! Empirical statistics of photon streams.
//!
//! Histogram-type estimators keep integer partial states whose merge is exact,
//! so chunked parallel runs reproduce sequential ones bit for bit.

use std::ops::Range;

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::rng::StreamRng;
use super::stream::{PhotonStream, StreamKind};
use crate::correlation::{mean_intensity, CorrelationCurve, Normalization};
use crate::dynamics::survival;
use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::laplace::{delay_moments, CountingStats, ASYMPTOTIC_WINDOWS};

/// Bootstrap replicates behind the standard error of `Q̂`.
pub const BOOTSTRAP_RESAMPLES: usize = 1000;

/// Fewest disjoint windows accepted by [`empirical_counting`].
pub const MIN_WINDOWS: usize = 50;

/// Expected count below which chi-square bins are merged.
const MIN_EXPECTED: f64 = 5.0;

/// Start photons handled per work item in [`empirical_correlation`].
const START_CHUNK: usize = 4096;

/// Mixed into the stream seed for bootstrap resampling.
const BOOTSTRAP_SALT: u64 = 0xB007_5A17;

/// Probability that a delay of `stream` exceeds `tau`, under its generating
/// law.
fn model_survival(stream: &PhotonStream, tau: f64) -> Result<f64> {
    Ok(match stream.kind {
        StreamKind::Cascade => survival(&stream.params, tau),
        StreamKind::PoissonReference => (-tau / delay_moments(&stream.params)?.mean_delay).exp(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DelayHistogram {
    /// `counts.len() + 1` contiguous edges starting at 0.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// Sum of `counts`.
    pub total: u64,
    /// Delays at or beyond the last edge.
    pub overflow: u64,
    /// Model probability of each bin, `P(lo) - P(hi)`.
    pub expected_mass: Vec<f64>,
    /// Model probability beyond the last edge.
    pub tail_mass: f64,
}

impl DelayHistogram {
    /// Number of delays, including overflow.
    pub fn delays(&self) -> u64 {
        self.total + self.overflow
    }
}

pub fn empirical_delay_histogram(
    stream: &PhotonStream,
    bin_width: f64,
    max_delay: f64,
) -> Result<DelayHistogram> {
    if stream.is_empty() {
        return Err(Error::Estimator("empty stream".into()));
    }
    if !(bin_width.is_finite() && bin_width > 0.0) {
        return Err(invalid(
            "bin_width",
            format!("must be > 0, got {bin_width}"),
        ));
    }
    if !(max_delay.is_finite() && max_delay >= bin_width) {
        return Err(invalid(
            "max_delay",
            format!("must be >= bin_width, got {max_delay}"),
        ));
    }
    let bins = (max_delay / bin_width - 1e-9).ceil() as usize;
    let edges: Vec<f64> = (0..=bins).map(|i| i as f64 * bin_width).collect();
    let top = edges[bins];
    let mut counts = vec![0u64; bins];
    let mut overflow = 0;
    for d in stream.delays() {
        if d >= top {
            overflow += 1;
        } else {
            counts[((d / bin_width) as usize).min(bins - 1)] += 1;
        }
    }
    let survivals = edges
        .iter()
        .map(|&e| model_survival(stream, e))
        .collect::<Result<Vec<f64>>>()?;
    let expected_mass = survivals.windows(2).map(|w| w[0] - w[1]).collect();
    Ok(DelayHistogram {
        edges,
        total: counts.iter().sum(),
        counts,
        overflow,
        expected_mass,
        tail_mass: survivals[bins],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    /// Bins left after merging those with expected count below 5.
    pub bins: usize,
}

/// Pearson goodness of fit of the histogram against its model bin masses,
/// the overflow counted as one extra bin.
pub fn chi_square_test(hist: &DelayHistogram) -> Result<ChiSquareResult> {
    let n = hist.delays() as f64;
    if n == 0.0 {
        return Err(Error::Estimator("no delays to test".into()));
    }
    let cells = hist
        .counts
        .iter()
        .zip(&hist.expected_mass)
        .map(|(&c, &m)| (c as f64, m * n))
        .chain(std::iter::once((hist.overflow as f64, hist.tail_mass * n)));

    let mut merged: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for (o, e) in cells {
        obs += o;
        exp += e;
        if exp >= MIN_EXPECTED {
            merged.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    if exp > 0.0 || obs > 0.0 {
        match merged.last_mut() {
            Some(last) => {
                last.0 += obs;
                last.1 += exp;
            }
            None => merged.push((obs, exp)),
        }
    }
    if merged.len() < 2 {
        return Err(Error::Estimator("fewer than two bins after merging".into()));
    }
    let statistic = merged.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let dof = merged.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| Error::Estimator(e.to_string()))?;
    Ok(ChiSquareResult {
        statistic,
        degrees_of_freedom: dof,
        p_value: dist.sf(statistic),
        bins: merged.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    /// `sup |F_n - F|` over the delays.
    pub statistic: f64,
    pub samples: usize,
    /// Critical distance at significance `alpha`.
    pub critical_value: f64,
    pub alpha: f64,
    pub passed: bool,
}

/// One-sample Kolmogorov–Smirnov test of the delays against `1 - P`.
///
/// The critical value uses the asymptotic Kolmogorov quantile with
/// Stephens' finite-sample correction.
pub fn ks_test(stream: &PhotonStream, alpha: f64) -> Result<KsResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
    }
    let mut delays: Vec<f64> = stream.delays().collect();
    if delays.is_empty() {
        return Err(Error::Estimator("no delays to test".into()));
    }
    delays.sort_by(f64::total_cmp);
    let n = delays.len() as f64;
    let mut statistic: f64 = 0.0;
    for (i, &d) in delays.iter().enumerate() {
        let cdf = 1.0 - model_survival(stream, d)?;
        statistic = statistic
            .max((i as f64 + 1.0) / n - cdf)
            .max(cdf - i as f64 / n);
    }
    let quantile = (-0.5 * (0.5 * alpha).ln()).sqrt();
    let critical_value = quantile / (n.sqrt() + 0.12 + 0.11 / n.sqrt());
    Ok(KsResult {
        statistic,
        samples: delays.len(),
        critical_value,
        alpha,
        passed: statistic < critical_value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DelaySummary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub mean_std_error: f64,
    pub variance_std_error: f64,
    /// `variance / mean² - 1`.
    pub q_from_delays: f64,
}

/// Sample mean and (unbiased) variance of the delays with their standard
/// errors.
pub fn delay_summary(stream: &PhotonStream) -> Result<DelaySummary> {
    let n = stream.len().saturating_sub(1);
    if n < 2 {
        return Err(Error::Estimator(format!("need at least 2 delays, got {n}")));
    }
    let nf = n as f64;
    let mean = stream.span() / nf;
    let (mut m2, mut m4) = (0.0, 0.0);
    for d in stream.delays() {
        let c = (d - mean).powi(2);
        m2 += c;
        m4 += c * c;
    }
    let variance = m2 / (nf - 1.0);
    let central4 = m4 / nf;
    let pop_var = m2 / nf;
    Ok(DelaySummary {
        count: n,
        mean,
        variance,
        mean_std_error: (variance / nf).sqrt(),
        variance_std_error: ((central4 - pop_var * pop_var) / nf).max(0.0).sqrt(),
        q_from_delays: variance / (mean * mean) - 1.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalCounting {
    pub stats: CountingStats,
    pub windows: usize,
    /// `variance / mean - 1` of the window counts.
    pub q_hat: f64,
    /// Bootstrap standard error of `q_hat`, resampling whole windows.
    pub q_std_error: f64,
}

fn counts_q(counts: &[u64]) -> f64 {
    let n = counts.len() as f64;
    let mean = counts.iter().sum::<u64>() as f64 / n;
    let var = counts
        .iter()
        .map(|&c| (c as f64 - mean).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    var / mean - 1.0
}

/// Counts photons in consecutive disjoint windows `[kT, (k+1)T)` covering
/// the stream, and reports sample mean, variance and `Q̂`.
pub fn empirical_counting(stream: &PhotonStream, window: f64) -> Result<EmpiricalCounting> {
    empirical_counting_with(stream, window, Execution::default())
}

pub fn empirical_counting_with(
    stream: &PhotonStream,
    window: f64,
    exec: Execution,
) -> Result<EmpiricalCounting> {
    if !(window.is_finite() && window > 0.0) {
        return Err(invalid("window", format!("must be > 0, got {window}")));
    }
    let span = stream.span();
    if window > span {
        return Err(invalid(
            "window",
            format!("{window} exceeds the stream span {span}"),
        ));
    }
    let windows = (span / window).floor() as usize;
    if windows < MIN_WINDOWS {
        return Err(Error::Estimator(format!(
            "only {windows} windows of length {window}; need at least {MIN_WINDOWS}"
        )));
    }
    let mut counts = vec![0u64; windows];
    for &t in &stream.times {
        let k = (t / window) as usize;
        if k < windows {
            counts[k] += 1;
        }
    }
    let n = windows as f64;
    let mean = counts.iter().sum::<u64>() as f64 / n;
    let variance = counts
        .iter()
        .map(|&c| (c as f64 - mean).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    let q_hat = variance / mean - 1.0;

    let seed = stream.seed ^ BOOTSTRAP_SALT;
    let replicates = exec.map_indexed(BOOTSTRAP_RESAMPLES, |r| {
        let mut rng = StreamRng::new(seed, r as u64);
        let sample: Vec<u64> = (0..windows).map(|_| counts[rng.index(windows)]).collect();
        counts_q(&sample)
    });
    let b = replicates.len() as f64;
    let rep_mean = replicates.iter().sum::<f64>() / b;
    let q_std_error = (replicates
        .iter()
        .map(|q| (q - rep_mean).powi(2))
        .sum::<f64>()
        / (b - 1.0))
        .sqrt();

    let mean_delay = span / (stream.len() - 1) as f64;
    Ok(EmpiricalCounting {
        stats: CountingStats {
            window,
            mean_count: mean,
            count_variance: variance,
            asymptotic_regime: window >= ASYMPTOTIC_WINDOWS * mean_delay,
        },
        windows,
        q_hat,
        q_std_error,
    })
}

/// Partial pair-separation histogram. `merge` is exact and commutative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LagHistogram {
    pub counts: Vec<u64>,
    pub starts: u64,
}

impl LagHistogram {
    pub fn empty(bins: usize) -> Self {
        Self {
            counts: vec![0; bins],
            starts: 0,
        }
    }

    /// Separations `t_j - t_i ∈ (0, max_lag]` for start photons `i` in
    /// `starts`, binned with width `max_lag / bins`.
    pub fn accumulate(times: &[f64], starts: Range<usize>, bins: usize, max_lag: f64) -> Self {
        let width = max_lag / bins as f64;
        let mut h = Self::empty(bins);
        for i in starts {
            h.starts += 1;
            let t0 = times[i];
            for &t in &times[i + 1..] {
                let d = t - t0;
                if d > max_lag {
                    break;
                }
                h.counts[((d / width) as usize).min(bins - 1)] += 1;
            }
        }
        h
    }

    pub fn merge(&mut self, other: &LagHistogram) {
        assert_eq!(self.counts.len(), other.counts.len(), "bin layouts differ");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.starts += other.starts;
    }

    /// Normalizes to `j(t)` given the mean photon rate.
    pub fn into_curve(self, max_lag: f64, mean_intensity: f64) -> CorrelationCurve {
        let bins = self.counts.len();
        let width = max_lag / bins as f64;
        let norm = self.starts as f64 * width * mean_intensity;
        CorrelationCurve {
            lags: (0..bins).map(|k| (k as f64 + 0.5) * width).collect(),
            values: self.counts.iter().map(|&c| c as f64 / norm).collect(),
            normalization: Normalization::NormalizedJ,
            even_extension: false,
            delta_weight: None,
            std_errors: Some(
                self.counts
                    .iter()
                    .map(|&c| (c as f64).sqrt() / norm)
                    .collect(),
            ),
        }
    }
}

/// Estimate of `j(t)` from all ordered pairs of photons.
///
/// Only photons at least `max_lag` before the end of the stream serve as
/// start photons, so every start sees the full lag range. The zero-lag
/// self pair is excluded.
pub fn empirical_correlation(
    stream: &PhotonStream,
    bin_width: f64,
    max_lag: f64,
) -> Result<CorrelationCurve> {
    empirical_correlation_with(stream, bin_width, max_lag, Execution::default())
}

pub fn empirical_correlation_with(
    stream: &PhotonStream,
    bin_width: f64,
    max_lag: f64,
    exec: Execution,
) -> Result<CorrelationCurve> {
    if !(bin_width.is_finite() && bin_width > 0.0) {
        return Err(invalid(
            "bin_width",
            format!("must be > 0, got {bin_width}"),
        ));
    }
    if !(max_lag.is_finite() && max_lag >= bin_width) {
        return Err(invalid(
            "max_lag",
            format!("must be >= bin_width {bin_width}, got {max_lag}"),
        ));
    }
    let span = stream.span();
    if max_lag > span / 10.0 {
        return Err(invalid(
            "max_lag",
            format!("{max_lag} exceeds a tenth of the stream span {span}"),
        ));
    }
    let bins = (max_lag / bin_width).round().max(1.0) as usize;
    let n_starts = stream.times.partition_point(|&t| t <= span - max_lag);
    let chunks = n_starts.div_ceil(START_CHUNK);
    let partials = exec.map_indexed(chunks, |c| {
        let range = c * START_CHUNK..((c + 1) * START_CHUNK).min(n_starts);
        LagHistogram::accumulate(&stream.times, range, bins, max_lag)
    });
    let mut total = LagHistogram::empty(bins);
    for p in &partials {
        total.merge(p);
    }
    Ok(total.into_curve(max_lag, mean_intensity(&stream.params)?))
}
