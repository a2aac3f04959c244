use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::grid::{fftshift, FrequencyGrid};
use crate::{Ensemble, Error, LagFunction, Result, Spectrum};

/// A `K × K` autocorrelation matrix `R(t₁, t₂)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrelationMatrix(Array2<f64>);

impl AutocorrelationMatrix {
    /// Wraps any square matrix. Entries are not validated so that
    /// diagnostics can report on malformed input.
    pub fn from_matrix(m: Array2<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.is_empty() {
            return Err(Error::ShapeMismatch {
                expected: "non-empty square matrix".into(),
                got: format!("{}x{}", m.nrows(), m.ncols()),
            });
        }
        Ok(AutocorrelationMatrix(m))
    }

    pub fn len(&self) -> usize {
        self.0.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.0
    }

    pub fn get(&self, t1: usize, t2: usize) -> f64 {
        self.0[[t1, t2]]
    }

    /// Entries `R(t, t − τ)` along one diagonal, in increasing `t`.
    pub(crate) fn diagonal(&self, lag: isize) -> impl Iterator<Item = f64> + '_ {
        let k = self.len() as isize;
        let start = lag.max(0);
        let end = k + lag.min(0);
        (start..end).map(move |t| self.0[[t as usize, (t - lag) as usize]])
    }
}

/// `R(t₁, t₂) = (1/P) Σ_p x_p[t₁]·x_p[t₂]`, exactly symmetric.
pub fn estimate_autocorrelation(ensemble: &Ensemble) -> AutocorrelationMatrix {
    let p = ensemble.realizations();
    let k = ensemble.len();
    if p == 1 {
        log::warn!("autocorrelation from a single realization is not an ensemble average");
    }
    // columns as contiguous vectors over realizations
    let cols: Vec<Vec<f64>> = (0..k).map(|t| ensemble.data().column(t).to_vec()).collect();
    let upper: Vec<Vec<f64>> = (0..k)
        .into_par_iter()
        .map(|i| {
            let a = &cols[i];
            (i..k)
                .map(|j| {
                    let b = &cols[j];
                    let mut s = 0.0;
                    for (x, y) in a.iter().zip(b) {
                        s += x * y;
                    }
                    s / p as f64
                })
                .collect()
        })
        .collect();
    let mut r = Array2::zeros((k, k));
    for (i, row) in upper.iter().enumerate() {
        for (off, &v) in row.iter().enumerate() {
            r[[i, i + off]] = v;
            r[[i + off, i]] = v;
        }
    }
    AutocorrelationMatrix(r)
}

/// Denominator used when averaging `R(t, t − τ)` over `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Divide by `K`. Its transform equals the `K`-sample ensemble periodogram exactly.
    Biased,
    /// Divide by the `K − |τ|` terms actually present.
    #[default]
    Unbiased,
}

impl std::str::FromStr for Normalization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "biased" => Ok(Normalization::Biased),
            "unbiased" => Ok(Normalization::Unbiased),
            other => Err(Error::invalid(format!(
                "normalization '{other}' is not biased|unbiased"
            ))),
        }
    }
}

/// Time average of `R(t, t − τ)` for `|τ| ≤ K − 1`.
pub fn averaged_autocorrelation(r: &AutocorrelationMatrix, norm: Normalization) -> LagFunction {
    let k = r.len();
    let max_lag = k - 1;
    let values = (-(max_lag as isize)..=max_lag as isize)
        .map(|lag| {
            let mut s = 0.0;
            for v in r.diagonal(lag) {
                s += v;
            }
            match norm {
                Normalization::Biased => s / k as f64,
                Normalization::Unbiased => s / (k - lag.unsigned_abs()) as f64,
            }
        })
        .collect();
    LagFunction::new(max_lag, values).expect("2K-1 lags")
}

/// Classical lag-averaged estimator `(1/P) Σ_p Σ_t x_p[t]·x_p[t − τ] / D(τ)`
/// with `D` chosen by `norm`, computed per realization with zero-padded FFTs.
///
/// Mathematically identical to `averaged_autocorrelation(estimate_autocorrelation(x))`
/// without forming the `K × K` matrix.
pub fn lag_averaged_autocorrelation(ensemble: &Ensemble, norm: Normalization) -> LagFunction {
    let k = ensemble.len();
    let p = ensemble.realizations();
    let n = (2 * k - 1).next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    const BLOCK: usize = 64;
    let blocks: Vec<Vec<f64>> = (0..p.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut acc = vec![0.0; k];
            let mut buf = vec![Complex64::new(0.0, 0.0); n];
            for row in (b * BLOCK)..((b + 1) * BLOCK).min(p) {
                for (c, &v) in buf.iter_mut().zip(ensemble.row_slice(row)) {
                    *c = Complex64::new(v, 0.0);
                }
                buf[k..].fill(Complex64::new(0.0, 0.0));
                fwd.process(&mut buf);
                for z in buf.iter_mut() {
                    *z = Complex64::new(z.norm_sqr(), 0.0);
                }
                inv.process(&mut buf);
                for (a, z) in acc.iter_mut().zip(&buf) {
                    *a += z.re / n as f64;
                }
            }
            acc
        })
        .collect();
    let sums = crate::reduce::pairwise_sum_vecs(&blocks, k);
    let one_sided: Vec<f64> = sums
        .iter()
        .enumerate()
        .map(|(tau, s)| {
            let denom = match norm {
                Normalization::Biased => k,
                Normalization::Unbiased => k - tau,
            };
            s / (p * denom) as f64
        })
        .collect();
    LagFunction::symmetric(&one_sided)
}

/// `R^m(τ) = max_t |R(t, t − τ)|`.
pub fn max_abs_autocorrelation(r: &AutocorrelationMatrix) -> LagFunction {
    let max_lag = r.len() - 1;
    let values = (-(max_lag as isize)..=max_lag as isize)
        .map(|lag| r.diagonal(lag).map(f64::abs).fold(0.0, f64::max))
        .collect();
    LagFunction::new(max_lag, values).expect("2K-1 lags")
}

/// Fourier transform `Σ_τ f(τ) e^{−jωτ}` of a symmetric lag function.
///
/// On a DFT grid the lags are folded modulo the grid size and transformed
/// with one FFT, which is exact at the grid frequencies; other grids use
/// direct sums. Bins below `-ε_num` are raised to `-ε_num` and counted in
/// [`Spectrum::clipped_bins`].
pub fn ft_of_lag(lag: &LagFunction, grid: &FrequencyGrid) -> Result<Spectrum> {
    let transform: Vec<Complex64> = match grid.dft_len() {
        Some(n) => {
            let mut folded = vec![Complex64::new(0.0, 0.0); n];
            for (tau, &v) in lag.lags().zip(lag.values()) {
                folded[tau.rem_euclid(n as isize) as usize].re += v;
            }
            FftPlanner::<f64>::new()
                .plan_fft_forward(n)
                .process(&mut folded);
            fftshift(&folded)
        }
        None => grid
            .omegas()
            .iter()
            .map(|&w| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (tau, &v) in lag.lags().zip(lag.values()) {
                    let (s, c) = (w * tau as f64).sin_cos();
                    acc += Complex64::new(v * c, -v * s);
                }
                acc
            })
            .collect(),
    };
    let real_scale = transform.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    let imag = transform.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag > 1e-6 * real_scale.max(f64::MIN_POSITIVE) {
        return Err(Error::AsymmetricLag {
            imag,
            real: real_scale,
        });
    }
    let mut values: Vec<f64> = transform.iter().map(|z| z.re).collect();
    let eps = crate::spectrum::NEGATIVE_RTOL * values.iter().copied().fold(0.0, f64::max);
    let mut clipped = 0;
    for v in values.iter_mut() {
        if *v < -eps {
            *v = -eps;
            clipped += 1;
        }
    }
    if clipped > 0 {
        log::warn!("ft_of_lag: {clipped} negative bins clipped to -{eps:e}");
    }
    Ok(Spectrum::new(grid.clone(), values)?.with_clipped(clipped))
}
