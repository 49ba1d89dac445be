//! Numerical laboratory for bandlimited (Paley–Wiener) signal spaces.
//!
//! The crate is organised around a spectral representation of signals:
//! a [`signal::Spectrum`] holds samples of the Fourier transform on a
//! quadrature grid over `[-sigma, sigma]`, and everything else — cardinal
//! and nonuniform sampling series, operator-norm probes, LTI filters built
//! from samples, and phaseless recovery — is driven by quadrature against
//! that grid.
//!
//! Modules:
//! - [`signal`]: spectra, evaluation, norms, reproducing kernels, test families
//! - [`sampling`]: sampling sets, generating functions, interpolation series
//! - [`divergence`]: operator-norm growth of truncated series, Walsh analogue
//! - [`lti`]: transfer functions and sample-based digital approximations
//! - [`phase`]: phaseless sampling designs and recovery pipeline

pub mod divergence;
pub mod error;
pub mod io;
pub mod lti;
pub mod phase;
pub mod rng;
pub mod sampling;
pub mod signal;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type C64 = num_complex::Complex64;
