//! Seedable photon streams and the estimators that check them against the
//! analytic laws.

mod estimators;
mod io;
mod rng;
mod sampler;
mod stream;

pub use estimators::{
    chi_square_test, delay_summary, empirical_correlation, empirical_correlation_with,
    empirical_counting, empirical_counting_with, empirical_delay_histogram, ks_test,
    ChiSquareResult, DelayHistogram, DelaySummary, EmpiricalCounting, KsResult, LagHistogram,
    BOOTSTRAP_RESAMPLES,
};
pub use io::{read_binary, read_csv, write_binary, write_csv, BINARY_MAGIC, BINARY_VERSION};
pub use rng::{uniform_open, StreamRng, GENERATOR_NAME};
pub use sampler::{sample_delay, sample_delay_with, SamplerTolerance};
pub use stream::{
    generate_poisson_reference, generate_stream, generate_stream_with, PhotonStream, StreamKind,
    CHUNK_LEN,
};
