//! Statistics of the fluorescence photon cascade emitted by a two-level atom
//! driven by a coherent laser.
//!
//! The photon stream is a renewal process: successive emission delays are
//! independent and share the density `K(τ)`, obtained in closed form from the
//! reversible evolution inside one dressed-atom multiplicity. Everything else
//! follows from `K`:
//!
//! * [`dynamics`]: amplitudes, survival probability `P`, delay density `K`,
//!   hazard `λ = K/P`, plus an RK4 oracle for the amplitudes.
//! * [`laplace`]: the rational Laplace transform `K̃(s)`, delay moments and
//!   long-window photon counting statistics (Mandel `Q`).
//! * [`correlation`]: `J̃ = K̃/(1-K̃)`, its pole/residue decomposition, the
//!   normalized correlation `j(t)`, intensity correlation and noise spectrum.
//! * [`monte_carlo`]: seedable inverse-CDF photon streams and the empirical
//!   estimators that cross-check the analytic results.
//!
//! Rates are absolute; with `γ = 1` every time is the dimensionless `γτ`.

pub mod correlation;
pub mod cubic;
pub mod dynamics;
mod error;
pub mod exec;
pub mod grid;
pub mod laplace;
pub mod monte_carlo;
mod params;
pub mod quadrature;

pub use error::{Error, Result};
pub use exec::Execution;
pub use params::AtomDriveParams;
