use serde::{Deserialize, Serialize};

use super::rng::StreamRng;
use super::sampler::{sample_delay_with, SamplerTolerance};
use crate::error::{invalid, Result};
use crate::exec::Execution;
use crate::laplace::delay_moments;
use crate::AtomDriveParams;

/// Delays drawn per generator stream. Part of the reproducibility contract.
pub const CHUNK_LEN: usize = 4096;

/// Generator streams of the exponential reference start here.
const POISSON_STREAM_BASE: u64 = 1 << 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StreamKind {
    /// Delays drawn from the atom's delay density `K`.
    Cascade,
    /// Exponential delays with the same mean, i.e. a standard Poisson process.
    PoissonReference,
}

impl StreamKind {
    pub fn code(self) -> u32 {
        match self {
            StreamKind::Cascade => 0,
            StreamKind::PoissonReference => 1,
        }
    }

    pub fn from_code(code: u32) -> Option<Self> {
        match code {
            0 => Some(StreamKind::Cascade),
            1 => Some(StreamKind::PoissonReference),
            _ => None,
        }
    }
}

/// Emission times `0 = t₀ < t₁ < …`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonStream {
    pub params: AtomDriveParams,
    pub seed: u64,
    pub kind: StreamKind,
    pub times: Vec<f64>,
}

impl PhotonStream {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Time of the last photon.
    pub fn span(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    pub fn delays(&self) -> impl Iterator<Item = f64> + '_ {
        self.times.windows(2).map(|w| w[1] - w[0])
    }
}

/// `n_photons` emission times, starting with the conditioning photon at 0.
pub fn generate_stream(
    params: &AtomDriveParams,
    n_photons: usize,
    seed: u64,
) -> Result<PhotonStream> {
    generate_stream_with(params, n_photons, seed, Execution::default())
}

/// Delay `k` is drawn from generator stream `k / CHUNK_LEN`, so the result
/// does not depend on `exec`.
pub fn generate_stream_with(
    params: &AtomDriveParams,
    n_photons: usize,
    seed: u64,
    exec: Execution,
) -> Result<PhotonStream> {
    check_len(n_photons)?;
    params.require_drive("stream generation")?;
    let mean = delay_moments(params)?.mean_delay;
    let tol = SamplerTolerance::default();
    let delays = draw_chunks(n_photons - 1, seed, 0, exec, |rng| {
        sample_delay_with(params, rng.uniform_open(), mean, tol)
    })?;
    Ok(assemble(*params, seed, StreamKind::Cascade, &delays))
}

/// Exponential-delay renewal stream with the same mean delay as `params`.
pub fn generate_poisson_reference(
    params: &AtomDriveParams,
    n_photons: usize,
    seed: u64,
    exec: Execution,
) -> Result<PhotonStream> {
    check_len(n_photons)?;
    let mean = delay_moments(params)?.mean_delay;
    let delays = draw_chunks(n_photons - 1, seed, POISSON_STREAM_BASE, exec, |rng| {
        Ok(-mean * rng.uniform_open().ln())
    })?;
    Ok(assemble(
        *params,
        seed,
        StreamKind::PoissonReference,
        &delays,
    ))
}

fn check_len(n_photons: usize) -> Result<()> {
    if n_photons == 0 {
        return Err(invalid("n_photons", "must be >= 1"));
    }
    Ok(())
}

fn draw_chunks<F>(
    count: usize,
    seed: u64,
    stream_base: u64,
    exec: Execution,
    draw: F,
) -> Result<Vec<f64>>
where
    F: Fn(&mut StreamRng) -> Result<f64> + Sync + Send,
{
    let mut out = vec![Ok(0.0); count];
    exec.for_each_chunk_mut(&mut out, CHUNK_LEN, |chunk, slots| {
        let mut rng = StreamRng::new(seed, stream_base + chunk as u64);
        for slot in slots {
            *slot = draw(&mut rng);
        }
    });
    out.into_iter().collect()
}

fn assemble(params: AtomDriveParams, seed: u64, kind: StreamKind, delays: &[f64]) -> PhotonStream {
    let mut times = Vec::with_capacity(delays.len() + 1);
    let mut t = 0.0;
    times.push(t);
    for d in delays {
        t += d;
        times.push(t);
    }
    PhotonStream {
        params,
        seed,
        kind,
        times,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn opt() -> AtomDriveParams {
        AtomDriveParams::new(1.0, SQRT_2, 0.0).unwrap()
    }

    #[test]
    fn deterministic_and_execution_independent() {
        let n = 3 * CHUNK_LEN + 17;
        let a = generate_stream_with(&opt(), n, 11, Execution::Sequential).unwrap();
        let b = generate_stream_with(&opt(), n, 11, Execution::Parallel).unwrap();
        let c = generate_stream(&opt(), n, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_ne!(a.times, generate_stream(&opt(), n, 12).unwrap().times);
    }

    #[test]
    fn prefix_stable() {
        let long = generate_stream(&opt(), 5000, 5).unwrap();
        let short = generate_stream(&opt(), 100, 5).unwrap();
        assert_eq!(&long.times[..100], &short.times[..]);
    }

    #[test]
    fn strictly_increasing_from_zero() {
        let s = generate_stream(&opt(), 20_000, 1).unwrap();
        assert_eq!(s.times[0], 0.0);
        assert!(s.times.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(s.len(), 20_000);
        assert_eq!(s.delays().count(), 19_999);
    }

    #[test]
    fn single_photon() {
        let s = generate_stream(&opt(), 1, 1).unwrap();
        assert_eq!(s.times, vec![0.0]);
        assert!(generate_stream(&opt(), 0, 1).is_err());
    }

    #[test]
    fn poisson_reference_mean() {
        let s = generate_poisson_reference(&opt(), 100_001, 9, Execution::default()).unwrap();
        assert_eq!(s.kind, StreamKind::PoissonReference);
        let mean = s.span() / 100_000.0;
        // exponential delays: σ = τ̄ = 2
        assert!((mean - 2.0).abs() < 3.0 * 2.0 / (1e5f64).sqrt());
    }
}
