use super::{
    averaged_autocorrelation, estimate_autocorrelation, estimate_psd, ft_of_lag, Normalization,
};
use crate::grid::FrequencyGrid;
use crate::{Ensemble, Error, LagFunction, Result, Spectrum};

/// Sup-norm distances between windowed ensemble PSDs and the transform of
/// the averaged autocorrelation over the largest window.
#[derive(Debug, Clone)]
pub struct WkConvergence {
    pub windows: Vec<usize>,
    pub distances: Vec<f64>,
    /// `N`-sample PSD for each window, on its own `N`-point grid.
    pub psds: Vec<Spectrum>,
    /// Biased averaged autocorrelation over the largest window.
    pub reference_lag: LagFunction,
    /// Its transform on the largest window's grid.
    pub reference: Spectrum,
}

impl WkConvergence {
    pub fn distance_at(&self, window: usize) -> Option<f64> {
        self.windows
            .iter()
            .position(|&w| w == window)
            .map(|i| self.distances[i])
    }
}

/// For each `N` in `windows`, `max_ω |S_N(ω) − F(ω)|` where `S_N` is the
/// `N`-sample ensemble PSD and `F` the transform of the biased averaged
/// autocorrelation of the largest window, both on the `N`-point grid. At the
/// largest window the two are the same quantity up to rounding.
pub fn verify_wk_convergence(ensemble: &Ensemble, windows: &[usize]) -> Result<WkConvergence> {
    let Some(&largest) = windows.last() else {
        return Err(Error::invalid("no windows given"));
    };
    if windows.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("windows must be strictly increasing"));
    }
    if windows[0] == 0 {
        return Err(Error::invalid("window length must be at least 1"));
    }
    if largest > ensemble.len() {
        return Err(Error::WindowTooLong {
            window: largest,
            len: ensemble.len(),
        });
    }
    let r = estimate_autocorrelation(&ensemble.window(largest)?);
    let reference_lag = averaged_autocorrelation(&r, Normalization::Biased);
    let reference = ft_of_lag(&reference_lag, &FrequencyGrid::dft(largest))?;

    let mut distances = Vec::with_capacity(windows.len());
    let mut psds = Vec::with_capacity(windows.len());
    for &n in windows {
        let psd = estimate_psd(ensemble, n)?;
        let target = if n == largest {
            reference.clone()
        } else {
            ft_of_lag(&reference_lag, &FrequencyGrid::dft(n))?
        };
        distances.push(psd.sup_distance(&target)?);
        psds.push(psd);
    }
    Ok(WkConvergence {
        windows: windows.to_vec(),
        distances,
        psds,
        reference_lag,
        reference,
    })
}
