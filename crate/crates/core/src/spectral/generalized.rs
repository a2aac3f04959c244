use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use super::AutocorrelationMatrix;
use crate::grid::{centered_to_bin, FrequencyGrid};
use crate::{BiSpectrum, Result};

/// `K(u, v) = Σ_{t₁,t₂} R(t₁, t₂) e^{−j(u·t₁ − v·t₂)}`.
///
/// With DFT grids on both axes the matrix is folded modulo the grid sizes
/// and transformed with row and column FFTs (forward along `t₁`, inverse
/// along `t₂`); any other grid pair uses separable direct sums.
pub fn estimate_generalized_psd(
    r: &AutocorrelationMatrix,
    u_grid: &FrequencyGrid,
    v_grid: &FrequencyGrid,
) -> Result<BiSpectrum> {
    u_grid.check_range()?;
    v_grid.check_range()?;
    let values = match (u_grid.dft_len(), v_grid.dft_len()) {
        (Some(nu), Some(nv)) => via_fft(r, nu, nv),
        _ => direct(r, &u_grid.omegas(), &v_grid.omegas()),
    };
    BiSpectrum::new(u_grid.clone(), v_grid.clone(), values)
}

fn via_fft(r: &AutocorrelationMatrix, nu: usize, nv: usize) -> Vec<Complex64> {
    let k = r.len();
    // folded[t2][t1]: column-major so the t1 transforms run over contiguous rows
    let mut folded = vec![Complex64::new(0.0, 0.0); nv * nu];
    for t1 in 0..k {
        for t2 in 0..k {
            folded[(t2 % nv) * nu + t1 % nu].re += r.get(t1, t2);
        }
    }
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(nu);
    folded.par_chunks_mut(nu).for_each(|col| fwd.process(col));

    // transpose to [u_bin][t2] and run the inverse (e^{+j v t2}) transforms
    let mut rows = vec![Complex64::new(0.0, 0.0); nu * nv];
    for t2 in 0..nv {
        for ub in 0..nu {
            rows[ub * nv + t2] = folded[t2 * nu + ub];
        }
    }
    let inv = planner.plan_fft_inverse(nv);
    rows.par_chunks_mut(nv).for_each(|row| inv.process(row));

    let mut out = Vec::with_capacity(nu * nv);
    for iu in 0..nu {
        let ub = centered_to_bin(iu, nu);
        for iv in 0..nv {
            out.push(rows[ub * nv + centered_to_bin(iv, nv)]);
        }
    }
    out
}

fn direct(r: &AutocorrelationMatrix, us: &[f64], vs: &[f64]) -> Vec<Complex64> {
    let k = r.len();
    // A[m][t2] = Σ_t1 e^{-j u_m t1} R(t1, t2)
    let partial: Vec<Vec<Complex64>> = us
        .par_iter()
        .map(|&u| {
            let phase: Vec<Complex64> = (0..k)
                .map(|t| Complex64::from_polar(1.0, -u * t as f64))
                .collect();
            (0..k)
                .map(|t2| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (t1, ph) in phase.iter().enumerate() {
                        acc += ph * r.get(t1, t2);
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let v_phase: Vec<Vec<Complex64>> = vs
        .iter()
        .map(|&v| {
            (0..k)
                .map(|t| Complex64::from_polar(1.0, v * t as f64))
                .collect()
        })
        .collect();
    partial
        .iter()
        .flat_map(|a| {
            v_phase.iter().map(move |ph| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (x, p) in a.iter().zip(ph) {
                    acc += x * p;
                }
                acc
            })
        })
        .collect()
}
