//! Direct-summation oracles shared by the integration tests.
#![allow(dead_code)]

use nonstat_spectral::grid::dft_omega;
use nonstat_spectral::{Ensemble, LagFunction};
use num_complex::Complex64;

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn peak(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

pub fn direct_periodogram(x: &Ensemble, n: usize) -> Vec<f64> {
    (0..n)
        .map(|m| {
            let w = dft_omega(m, n);
            let mut acc = 0.0;
            for p in 0..x.realizations() {
                let row = x.row_slice(p);
                let z: Complex64 = (0..n)
                    .map(|t| row[t] * Complex64::from_polar(1.0, -w * t as f64))
                    .sum();
                acc += z.norm_sqr() / n as f64;
            }
            acc / x.realizations() as f64
        })
        .collect()
}

pub fn direct_r(x: &Ensemble) -> Vec<Vec<f64>> {
    let (p, k) = (x.realizations(), x.len());
    let mut r = vec![vec![0.0; k]; k];
    for (t1, row) in r.iter_mut().enumerate() {
        for (t2, v) in row.iter_mut().enumerate() {
            *v = (0..p)
                .map(|i| x.row_slice(i)[t1] * x.row_slice(i)[t2])
                .sum::<f64>()
                / p as f64;
        }
    }
    r
}

pub fn direct_ft(lag: &LagFunction, omegas: &[f64]) -> Vec<f64> {
    omegas
        .iter()
        .map(|&w| {
            lag.lags()
                .zip(lag.values())
                .map(|(t, v)| v * (w * t as f64).cos())
                .sum()
        })
        .collect()
}

pub fn direct_generalized(r: &[Vec<f64>], us: &[f64], vs: &[f64]) -> Vec<Complex64> {
    let k = r.len();
    let mut out = Vec::new();
    for &u in us {
        for &v in vs {
            let mut z = Complex64::new(0.0, 0.0);
            for (t1, row) in r.iter().enumerate() {
                for (t2, val) in row.iter().enumerate().take(k) {
                    z += val * Complex64::from_polar(1.0, -(u * t1 as f64 - v * t2 as f64));
                }
            }
            out.push(z);
        }
    }
    out
}
