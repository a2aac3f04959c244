use std::time::{Duration, Instant};

use serde::Serialize;

use crate::grid::FrequencyGrid;
use crate::spectral::{estimate_autocorrelation, estimate_generalized_psd, estimate_psd};
use crate::synthesis::{generate_noise, TemporalModel};
use crate::{Error, Result, VarianceProfile};

/// Median wall-clock times of the two estimation pipelines at one size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    #[serde(rename = "P")]
    pub realizations: usize,
    #[serde(rename = "T")]
    pub len: usize,
    pub psd_seconds: f64,
    pub generalized_seconds: f64,
    /// `generalized_seconds / psd_seconds`.
    pub ratio: f64,
}

fn median_time(reps: usize, mut f: impl FnMut() -> Result<()>) -> Result<Duration> {
    f()?; // warm caches and FFT plans
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        f()?;
        times.push(start.elapsed());
    }
    times.sort();
    Ok(times[times.len() / 2])
}

/// Times the ensemble PSD (`P` FFTs of length `T`) against the generalized
/// PSD (`T × T` autocorrelation estimate plus its 2-D FFT) on white noise.
pub fn run_bench(sizes: &[(usize, usize)], reps: usize, seed: u64) -> Result<Vec<BenchRow>> {
    if reps == 0 {
        return Err(Error::invalid("need at least one repetition"));
    }
    sizes
        .iter()
        .map(|&(p, t)| {
            let profile = VarianceProfile::constant(t, 1.0)?;
            let x = generate_noise(&profile, p, TemporalModel::Iid, seed)?;
            let grid = FrequencyGrid::dft(t);
            let psd = median_time(reps, || estimate_psd(&x, t).map(drop))?;
            let generalized = median_time(reps, || {
                let r = estimate_autocorrelation(&x);
                estimate_generalized_psd(&r, &grid, &grid).map(drop)
            })?;
            let psd_seconds = psd.as_secs_f64();
            let generalized_seconds = generalized.as_secs_f64();
            log::info!("P={p} T={t}: psd {psd:?}, generalized {generalized:?}");
            Ok(BenchRow {
                realizations: p,
                len: t,
                psd_seconds,
                generalized_seconds,
                ratio: generalized_seconds / psd_seconds.max(1e-12),
            })
        })
        .collect()
}
