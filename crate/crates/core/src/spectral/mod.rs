//! Spectral estimators for ensembles, closed forms for filtered
//! nonstationary white noise, and the finite-window check that the PSD is
//! the Fourier transform of the time-averaged autocorrelation.

mod autocorr;
mod convergence;
mod diagnostics;
mod generalized;
mod periodogram;
mod theory;

pub use autocorr::{
    averaged_autocorrelation, estimate_autocorrelation, ft_of_lag, lag_averaged_autocorrelation,
    max_abs_autocorrelation, AutocorrelationMatrix, Normalization,
};
pub use convergence::{verify_wk_convergence, WkConvergence};
pub use diagnostics::{check_assumptions, AssumptionReport};
pub use generalized::estimate_generalized_psd;
pub use periodogram::estimate_psd;
pub use theory::{impulse_autocorrelation, theoretical_avg_acf, theoretical_psd_ns1};
