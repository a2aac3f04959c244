use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::grid::{fftshift, FrequencyGrid};
use crate::reduce::pairwise_sum_vecs;
use crate::{Ensemble, Error, Result, Spectrum};

/// Realizations per accumulation block. Fixed so the reduction tree does not
/// depend on the thread pool.
const BLOCK: usize = 64;

/// Ensemble-averaged periodogram of the first `window` samples:
/// `(1/P) Σ_p |DFT(x_p[0..N])|² / N` on the centered `N`-point DFT grid.
pub fn estimate_psd(ensemble: &Ensemble, window: usize) -> Result<Spectrum> {
    let k = ensemble.len();
    if window == 0 {
        return Err(Error::invalid("window length must be at least 1"));
    }
    if window > k {
        return Err(Error::WindowTooLong { window, len: k });
    }
    let p = ensemble.realizations();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(window);
    let norm = window as f64;

    let blocks: Vec<Vec<f64>> = (0..p.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut acc = vec![0.0; window];
            let mut buf = vec![Complex64::new(0.0, 0.0); window];
            let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
            for row in (b * BLOCK)..((b + 1) * BLOCK).min(p) {
                let x = &ensemble.row_slice(row)[..window];
                for (c, &v) in buf.iter_mut().zip(x) {
                    *c = Complex64::new(v, 0.0);
                }
                fft.process_with_scratch(&mut buf, &mut scratch);
                for (a, c) in acc.iter_mut().zip(&buf) {
                    *a += c.norm_sqr() / norm;
                }
            }
            acc
        })
        .collect();

    let total = pairwise_sum_vecs(&blocks, window);
    let averaged: Vec<f64> = total.iter().map(|v| v / p as f64).collect();
    Spectrum::new(FrequencyGrid::dft(window), fftshift(&averaged))
}
