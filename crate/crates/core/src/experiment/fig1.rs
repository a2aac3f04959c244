use std::io::Write;
use std::path::PathBuf;

use super::ExperimentConfig;
use crate::io::{create, write_spectrum};
use crate::spectral::{verify_wk_convergence, WkConvergence};
use crate::synthesis::synthesize;
use crate::{Error, Result};

#[derive(Debug)]
pub struct Fig1Output {
    pub convergence: WkConvergence,
    pub files: Vec<PathBuf>,
}

/// Synthesizes the configured ensemble and writes, under `out_dir`:
/// `fig1_psd_N<n>.csv` per window, `fig1_reference.csv` (transform of the
/// averaged autocorrelation over the largest window) and
/// `fig1_distances.csv` (`window,distance`).
pub fn run_fig1(config: &ExperimentConfig) -> Result<Fig1Output> {
    config.validate()?;
    if config.windows.iter().any(|&n| n == 0 || n > config.len) {
        return Err(Error::invalid(format!(
            "windows must lie in [1, {}]",
            config.len
        )));
    }
    let filter = config.filter()?;
    let profile = config.variance_profile()?;
    let x = synthesize(
        &profile,
        &filter,
        config.realizations,
        config.temporal,
        config.seed,
        config.warmup,
    )?;
    let convergence = verify_wk_convergence(&x, &config.windows)?;
    for (n, d) in convergence.windows.iter().zip(&convergence.distances) {
        log::info!("N={n}: sup distance {d:e}");
    }

    let dir = &config.out_dir;
    let mut files = Vec::new();
    for (n, psd) in convergence.windows.iter().zip(&convergence.psds) {
        let path = dir.join(format!("fig1_psd_N{n}.csv"));
        write_spectrum(psd, create(&path)?)?;
        files.push(path);
    }
    let path = dir.join("fig1_reference.csv");
    write_spectrum(&convergence.reference, create(&path)?)?;
    files.push(path);

    let path = dir.join("fig1_distances.csv");
    let mut w = create(&path)?;
    writeln!(w, "window,distance")?;
    for (n, d) in convergence.windows.iter().zip(&convergence.distances) {
        writeln!(w, "{n},{d:?}")?;
    }
    w.flush()?;
    files.push(path);

    Ok(Fig1Output { convergence, files })
}
