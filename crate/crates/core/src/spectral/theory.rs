use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::filter::LtiFilter;
use crate::grid::FrequencyGrid;
use crate::{LagFunction, Result, Spectrum, VarianceProfile};

/// Deterministic autocorrelation `Σ_k h[k]·h[k − τ]` of the truncated
/// impulse response for `τ = 0..L`, computed through a zero-padded FFT.
pub fn impulse_autocorrelation(filter: &LtiFilter) -> Vec<f64> {
    let h = filter.impulse_response();
    let l = h.len();
    let n = (2 * l - 1).next_power_of_two();
    let mut buf: Vec<Complex64> = h.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    buf.resize(n, Complex64::new(0.0, 0.0));
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(n).process(&mut buf);
    for z in buf.iter_mut() {
        *z = Complex64::new(z.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf[..l].iter().map(|z| z.re / n as f64).collect()
}

/// `σ̄_w² · (h ⋆ h(−·))(τ)` on lags `|τ| ≤ K − 1`, `K` the profile length.
pub fn theoretical_avg_acf(filter: &LtiFilter, profile: &VarianceProfile) -> LagFunction {
    let k = profile.len();
    let acf = impulse_autocorrelation(filter);
    let scale = profile.mean_variance();
    let one_sided: Vec<f64> = (0..k)
        .map(|tau| acf.get(tau).map_or(0.0, |v| scale * v))
        .collect();
    LagFunction::symmetric(&one_sided)
}

/// `σ̄_w² · |H(ω)|²` from the exact rational transfer function.
pub fn theoretical_psd_ns1(
    filter: &LtiFilter,
    profile: &VarianceProfile,
    grid: &FrequencyGrid,
) -> Result<Spectrum> {
    let scale = profile.mean_variance();
    let values = grid
        .omegas()
        .iter()
        .map(|&w| scale * filter.response_at(w).norm_sqr())
        .collect();
    Spectrum::new(grid.clone(), values)
}
