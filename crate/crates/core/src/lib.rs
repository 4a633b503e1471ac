//! Numerical toolkit for gaps in phase space.
//!
//! Given a sampling measure for the wavelet transform with a Laguerre
//! wavelet, or for the short-time Fourier transform with a Hermite window,
//! the radius of any ball free of sampling mass is bounded by an explicit
//! function of the ratio of the sampling constants. This crate evaluates
//! those bounds, replays the partition argument behind them numerically,
//! and checks the closed-form kernels they rest on against independent
//! quadrature oracles.
//!
//! Module map:
//!
//! * [`geometry`]: the (ax+b)-group on the upper half-plane, pseudohyperbolic
//!   metrics, and the Möbius transform onto the unit disk.
//! * [`special`]: Laguerre polynomials, Hermite functions, log-gamma.
//! * [`quadrature`]: Gauss–Laguerre and Gauss–Legendre rules.
//! * [`wavelet`]: Laguerre wavelets, the wavelet-transform oracle and kernel.
//! * [`stft`]: Hermite windows, the STFT oracle and kernel.
//! * [`partition`]: angular sector partitions used by the gap arguments.
//! * [`certify`]: gap-radius bounds and partition-chain certificates.
//! * [`sampling`]: discrete measures, holes, frame-bound estimates, experiments.
//! * [`suites`]: named verification suites aggregating the invariants above.
//!
//! The STFT with the Hermite window `h_n` is, up to a Gaussian weight and a
//! phase, the Bargmann transform onto the true polyanalytic Fock space of
//! order `n`; the bounds transfer verbatim. This crate does not model those
//! spaces directly.

// `!(x > 0.0)` is used on purpose: it rejects NaN along with the range.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod certify;
pub mod error;
pub mod geometry;
pub mod partition;
pub mod quadrature;
pub mod sampling;
pub mod special;
pub mod stft;
pub mod suites;
pub mod wavelet;

pub use error::{Error, Result};
pub use num_complex::Complex64;
