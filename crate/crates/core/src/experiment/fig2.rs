use std::f64::consts::PI;
use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;

use super::{BandwidthSource, ExperimentConfig};
use crate::grid::FrequencyGrid;
use crate::io::{create, write_json, write_lag_function, write_spectrum};
use crate::sampling::{
    fractional_bandwidth, make_plan, out_of_band_fraction, reconstruction_mse, sinc_reconstruct,
    subsample,
};
use crate::spectral::{
    estimate_psd, lag_averaged_autocorrelation, theoretical_avg_acf, theoretical_psd_ns1,
    Normalization,
};
use crate::synthesis::synthesize;
use crate::{Ensemble, LagFunction, Result, SamplingPlan, Spectrum};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig2Summary {
    #[serde(rename = "K")]
    pub len: usize,
    #[serde(rename = "P")]
    pub realizations: usize,
    pub seed: u64,
    pub temporal: String,
    pub bandwidth_source: BandwidthSource,
    #[serde(rename = "B")]
    pub bandwidth: f64,
    pub bandwidth_over_pi: f64,
    #[serde(rename = "M")]
    pub decimation: usize,
    pub fraction: f64,
    /// Pooled reconstruction error, percent.
    pub mse_percent: f64,
    /// PSD mass beyond `B`, percent of total.
    pub out_of_band_percent: f64,
    /// PSD mass beyond the folding frequency `π/M`, percent of total.
    pub beyond_nyquist_percent: f64,
}

#[derive(Debug)]
pub struct Fig2Output {
    pub summary: Fig2Summary,
    pub plan: SamplingPlan,
    pub theoretical_acf: LagFunction,
    pub estimated_acf: LagFunction,
    pub theoretical_psd: Spectrum,
    pub estimated_psd: Spectrum,
    pub reconstructed: Ensemble,
    pub files: Vec<PathBuf>,
}

/// Subsampling at the fractional bandwidth of the `K`-sample PSD followed
/// by sinc reconstruction. Writes under `out_dir`:
/// `fig2_acf_theory.csv`, `fig2_acf_estimate.csv`, `fig2_psd_theory.csv`,
/// `fig2_psd_estimate.csv`, `fig2_reconstruction.csv`
/// (`k,original,reconstructed,kept` for realization 0) and `fig2_summary.json`.
pub fn run_fig2(config: &ExperimentConfig) -> Result<Fig2Output> {
    config.validate()?;
    let k = config.len;
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

    let theoretical_acf = theoretical_avg_acf(&filter, &profile);
    let estimated_acf = lag_averaged_autocorrelation(&x, Normalization::Unbiased);
    let grid = FrequencyGrid::dft(k);
    let theoretical_psd = theoretical_psd_ns1(&filter, &profile, &grid)?;
    let estimated_psd = estimate_psd(&x, k)?;

    let band_psd = match config.bandwidth_source {
        BandwidthSource::Estimated => &estimated_psd,
        BandwidthSource::Theoretical => &theoretical_psd,
    };
    let bandwidth = fractional_bandwidth(band_psd, config.fraction)?;
    let plan = make_plan(bandwidth, config.fraction, config.decimation_cap())?;
    let samples = subsample(&x, &plan)?;
    let reconstructed = sinc_reconstruct(&samples, &plan, k)?;
    let mse = reconstruction_mse(&x, &reconstructed)?;
    log::info!(
        "B={:.4}pi M={} pooled MSE {:.2}%",
        bandwidth / PI,
        plan.decimation,
        mse.pooled_percent
    );

    let summary = Fig2Summary {
        len: k,
        realizations: config.realizations,
        seed: config.seed,
        temporal: config.temporal.to_string(),
        bandwidth_source: config.bandwidth_source,
        bandwidth,
        bandwidth_over_pi: bandwidth / PI,
        decimation: plan.decimation,
        fraction: config.fraction,
        mse_percent: mse.pooled_percent,
        out_of_band_percent: 100.0 * out_of_band_fraction(band_psd, bandwidth)?,
        beyond_nyquist_percent: 100.0
            * out_of_band_fraction(band_psd, PI / plan.decimation as f64)?,
    };

    let dir = &config.out_dir;
    let mut files = Vec::new();
    let mut file = |name: &str| -> Result<_> {
        let path = dir.join(name);
        let w = create(&path)?;
        files.push(path);
        Ok(w)
    };
    write_lag_function(&theoretical_acf, file("fig2_acf_theory.csv")?)?;
    write_lag_function(&estimated_acf, file("fig2_acf_estimate.csv")?)?;
    write_spectrum(&theoretical_psd, file("fig2_psd_theory.csv")?)?;
    write_spectrum(&estimated_psd, file("fig2_psd_estimate.csv")?)?;
    {
        let mut w = file("fig2_reconstruction.csv")?;
        writeln!(w, "k,original,reconstructed,kept")?;
        let orig = x.row_slice(0);
        let rec = reconstructed.row_slice(0);
        for t in 0..k {
            let kept = u8::from(t % plan.decimation == 0);
            writeln!(w, "{t},{:?},{:?},{kept}", orig[t], rec[t])?;
        }
        w.flush()?;
    }
    write_json(&summary, file("fig2_summary.json")?)?;

    Ok(Fig2Output {
        summary,
        plan,
        theoretical_acf,
        estimated_acf,
        theoretical_psd,
        estimated_psd,
        reconstructed,
        files,
    })
}
