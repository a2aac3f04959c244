//! Spectral analysis and PSD-guided subsampling of nonstationary random processes.
//!
//! The crate works with ensembles of `P` independent realizations of a
//! length-`K` discrete signal. It provides
//!
//! * synthesis of filtered nonstationary white Gaussian noise ([`synthesis`]),
//! * ensemble PSD, autocorrelation and generalized (2-D) PSD estimators,
//!   closed forms for filtered nonstationary white noise, and a numerical
//!   check that the PSD equals the Fourier transform of the time-averaged
//!   autocorrelation ([`spectral`]),
//! * fractional-bandwidth subsampling with sinc reconstruction ([`sampling`]),
//! * the experiment runners behind the command-line tool ([`experiment`]).
//!
//! All frequencies are angular, in radians per sample, on `[-π, π)`.

pub mod ensemble;
pub mod error;
pub mod experiment;
pub mod filter;
pub mod grid;
pub mod io;
pub mod profile;
pub mod reduce;
pub mod sampling;
pub mod spectral;
pub mod spectrum;
pub mod synthesis;

pub use ensemble::{Decimation, Ensemble};
pub use error::{Error, Result};
pub use filter::{frequency_response, make_filter, LtiFilter};
pub use grid::FrequencyGrid;
pub use profile::VarianceProfile;
pub use sampling::SamplingPlan;
pub use spectrum::{BiSpectrum, LagFunction, Spectrum};
pub use synthesis::TemporalModel;
