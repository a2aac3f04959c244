//! Fractional-bandwidth subsampling with sinc reconstruction.
//!
//! A process whose PSD is confined to `|ω| ≤ B` can be recovered in mean
//! square from every `M`-th sample when `π/M > B`. The bandwidth here is the
//! smallest frequency holding a given fraction of the PSD mass, so the
//! reconstruction error measures how much power (plus its alias) lies
//! outside the retained band.

use std::f64::consts::PI;

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::reduce::pairwise_sum;
use crate::{Decimation, Ensemble, Error, Result, Spectrum};

/// Bandwidth, integer decimation factor, and the energy fraction that produced them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingPlan {
    #[serde(rename = "B")]
    pub bandwidth: f64,
    #[serde(rename = "M")]
    pub decimation: usize,
    pub fraction: f64,
}

impl SamplingPlan {
    pub fn validate(&self) -> Result<()> {
        if self.decimation == 0 {
            return Err(Error::invalid("decimation factor must be at least 1"));
        }
        if self.bandwidth.is_nan() || PI / self.decimation as f64 <= self.bandwidth {
            return Err(Error::invalid(format!(
                "pi/{} does not exceed bandwidth {}",
                self.decimation, self.bandwidth
            )));
        }
        Ok(())
    }
}

/// Frequencies of `spectrum` grouped by `|ω|`, ascending, with the mass of each group.
fn radial_mass(spectrum: &Spectrum) -> Vec<(f64, f64)> {
    let omegas = spectrum.omegas();
    let mut order: Vec<usize> = (0..omegas.len()).collect();
    order.sort_by(|&a, &b| omegas[a].abs().total_cmp(&omegas[b].abs()).then(a.cmp(&b)));
    let mut groups: Vec<(f64, f64)> = Vec::new();
    for m in order {
        let w = omegas[m].abs();
        let v = spectrum.values()[m].max(0.0);
        match groups.last_mut() {
            Some((gw, mass)) if (w - *gw).abs() <= 1e-12 * (1.0 + w) => *mass += v,
            _ => groups.push((w, v)),
        }
    }
    groups
}

/// Smallest grid frequency `B` with `Σ_{|ω| ≤ B} S(ω) ≥ fraction · Σ S(ω)`,
/// accumulating symmetrically outward from `ω = 0`.
pub fn fractional_bandwidth(spectrum: &Spectrum, fraction: f64) -> Result<f64> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::invalid(format!("fraction {fraction} not in (0, 1]")));
    }
    spectrum.validate()?;
    let groups = radial_mass(spectrum);
    let mut cumulative = Vec::with_capacity(groups.len());
    let mut acc = 0.0;
    for (_, mass) in &groups {
        acc += mass;
        cumulative.push(acc);
    }
    let total = acc;
    if total.is_nan() || total <= 0.0 {
        return Err(Error::EmptySpectrum);
    }
    let target = fraction * total;
    let idx = cumulative
        .iter()
        .position(|&c| c >= target)
        .unwrap_or(groups.len() - 1);
    Ok(groups[idx].0)
}

/// Fraction of the spectrum's mass at `|ω| > cutoff`.
pub fn out_of_band_fraction(spectrum: &Spectrum, cutoff: f64) -> Result<f64> {
    let groups = radial_mass(spectrum);
    let total: f64 = groups.iter().map(|g| g.1).sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::EmptySpectrum);
    }
    let outside: f64 = groups
        .iter()
        .filter(|(w, _)| *w > cutoff * (1.0 + 1e-12))
        .map(|g| g.1)
        .sum();
    Ok(outside / total)
}

/// Largest `M ≤ max_decimation` with `π/M > B` (at least 1).
pub fn make_plan(bandwidth: f64, fraction: f64, max_decimation: usize) -> Result<SamplingPlan> {
    if !(0.0..PI).contains(&bandwidth) {
        return Err(Error::invalid(format!(
            "bandwidth {bandwidth} not in [0, pi)"
        )));
    }
    let cap = max_decimation.max(1);
    let decimation = if bandwidth == 0.0 {
        cap
    } else {
        let mut m = ((PI / bandwidth).floor() as usize).clamp(1, cap);
        while m > 1 && PI / m as f64 <= bandwidth {
            m -= 1;
        }
        while m < cap && PI / (m + 1) as f64 > bandwidth {
            m += 1;
        }
        m
    };
    Ok(SamplingPlan {
        bandwidth,
        decimation,
        fraction,
    })
}

/// Keeps samples `0, M, 2M, …` of every realization.
pub fn subsample(ensemble: &Ensemble, plan: &SamplingPlan) -> Result<Ensemble> {
    plan.validate()?;
    let m = plan.decimation;
    let k = ensemble.len();
    let kept = k.div_ceil(m);
    let data = Array2::from_shape_fn((ensemble.realizations(), kept), |(p, n)| {
        ensemble.data()[[p, n * m]]
    });
    Ok(Ensemble::from_parts(
        data,
        ensemble.seed(),
        Some(Decimation {
            factor: m,
            original_len: k,
        }),
    ))
}

/// `sin(πx)/(πx)` with `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = PI * x;
        px.sin() / px
    }
}

/// `kernel[n][t] = sinc((t − nM)/M)`, exactly 0 or 1 where `t` is a multiple of `M`.
fn sinc_kernel(kept: usize, m: usize, len: usize) -> Array2<f64> {
    Array2::from_shape_fn((kept, len), |(n, t)| {
        let offset = t as isize - (n * m) as isize;
        if offset % m as isize == 0 {
            if offset == 0 {
                1.0
            } else {
                0.0
            }
        } else {
            sinc(offset as f64 / m as f64)
        }
    })
}

/// `x̂[t] = Σ_n s[n]·sinc((t − nM)/M)` for `t = 0..len`, a truncated cardinal series.
pub fn sinc_reconstruct(samples: &Ensemble, plan: &SamplingPlan, len: usize) -> Result<Ensemble> {
    plan.validate()?;
    let m = plan.decimation;
    if samples.len() != len.div_ceil(m) {
        return Err(Error::ShapeMismatch {
            expected: format!("{} samples for length {len} at M={m}", len.div_ceil(m)),
            got: format!("{} samples", samples.len()),
        });
    }
    if let Some(d) = samples.decimation() {
        if d.factor != m || d.original_len != len {
            return Err(Error::invalid(format!(
                "samples were decimated by {} from length {}, plan/length say {m} and {len}",
                d.factor, d.original_len
            )));
        }
    }
    let kernel = sinc_kernel(samples.len(), m, len);
    let out = samples.data().dot(&kernel);
    Ok(Ensemble::from_parts(out, samples.seed(), None))
}

/// Normalised squared reconstruction error in percent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MseReport {
    /// `100 · Σ_{p,k}(x − x̂)² / Σ_{p,k} x²`.
    pub pooled_percent: f64,
    /// Same ratio per realization; `None` where the realization has zero energy.
    pub per_realization: Vec<Option<f64>>,
}

pub fn reconstruction_mse(original: &Ensemble, reconstructed: &Ensemble) -> Result<MseReport> {
    original.same_shape(reconstructed)?;
    let rows: Vec<(f64, f64)> = (0..original.realizations())
        .into_par_iter()
        .map(|p| {
            let x = original.row_slice(p);
            let y = reconstructed.row_slice(p);
            let mut err = 0.0;
            let mut energy = 0.0;
            for (a, b) in x.iter().zip(y) {
                err += (a - b) * (a - b);
                energy += a * a;
            }
            (err, energy)
        })
        .collect();
    let err = pairwise_sum(&rows.iter().map(|r| r.0).collect::<Vec<_>>());
    let energy = pairwise_sum(&rows.iter().map(|r| r.1).collect::<Vec<_>>());
    if energy == 0.0 {
        return Err(Error::ZeroSignal);
    }
    Ok(MseReport {
        pooled_percent: 100.0 * err / energy,
        per_realization: rows
            .iter()
            .map(|&(e, s)| (s > 0.0).then(|| 100.0 * e / s))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::FrequencyGrid;

    fn ens(rows: Vec<Vec<f64>>) -> Ensemble {
        Ensemble::from_rows(rows, 0).unwrap()
    }

    #[test]
    fn delta_spectrum_bandwidth_is_zero() {
        let mut v = vec![0.0; 16];
        v[8] = 5.0;
        let s = Spectrum::new(FrequencyGrid::dft(16), v).unwrap();
        assert_eq!(fractional_bandwidth(&s, 0.9).unwrap(), 0.0);
    }

    #[test]
    fn flat_spectrum_bandwidth() {
        let n = 100;
        let s = Spectrum::new(FrequencyGrid::dft(n), vec![1.0; n]).unwrap();
        let b = fractional_bandwidth(&s, 0.9).unwrap();
        // cumulative oracle: bins with |ω| ≤ B must number at least 90
        let omegas = s.omegas();
        let inside = |w: f64| omegas.iter().filter(|o| o.abs() <= w + 1e-12).count();
        assert!(inside(b) >= 90);
        let step = 2.0 * PI / n as f64;
        assert!(inside(b - step) < 90);
        assert!((b - 0.9 * PI).abs() <= step);
    }

    #[test]
    fn empty_spectrum_and_bad_fraction() {
        let s = Spectrum::new(FrequencyGrid::dft(4), vec![0.0; 4]).unwrap();
        assert!(matches!(
            fractional_bandwidth(&s, 0.5),
            Err(Error::EmptySpectrum)
        ));
        let s = Spectrum::new(FrequencyGrid::dft(4), vec![1.0; 4]).unwrap();
        assert!(fractional_bandwidth(&s, 0.0).is_err());
        assert!(fractional_bandwidth(&s, 1.5).is_err());
        assert_eq!(fractional_bandwidth(&s, 1.0).unwrap(), PI);
    }

    #[test]
    fn plan_factors() {
        assert_eq!(make_plan(0.4 * PI, 0.9, 100).unwrap().decimation, 2);
        assert_eq!(make_plan(0.99 * PI, 0.9, 100).unwrap().decimation, 1);
        assert_eq!(make_plan(0.0, 0.9, 125).unwrap().decimation, 125);
        // strict inequality: π/2 is not > π/2
        assert_eq!(make_plan(0.5 * PI, 0.9, 100).unwrap().decimation, 1);
        assert_eq!(make_plan(0.216 * PI, 0.9, 100).unwrap().decimation, 4);
        assert_eq!(make_plan(0.01, 0.9, 10).unwrap().decimation, 10);
        assert!(make_plan(PI, 0.9, 10).is_err());
        assert!(make_plan(-0.1, 0.9, 10).is_err());
    }

    #[test]
    fn plan_serializes_with_contract_keys() {
        let plan = make_plan(0.4 * PI, 0.9, 100).unwrap();
        let json = serde_json::to_value(plan).unwrap();
        assert_eq!(json["M"], 2);
        assert!(json.get("B").is_some() && json.get("fraction").is_some());
        let back: SamplingPlan = serde_json::from_value(json).unwrap();
        assert_eq!(back, plan);
    }

    #[test]
    fn subsample_indices() {
        let x = ens(vec![(0..10).map(f64::from).collect()]);
        let plan = SamplingPlan {
            bandwidth: 0.1,
            decimation: 2,
            fraction: 0.9,
        };
        let s = subsample(&x, &plan).unwrap();
        assert_eq!(s.row_slice(0), &[0.0, 2.0, 4.0, 6.0, 8.0]);
        assert_eq!(
            s.decimation(),
            Some(Decimation {
                factor: 2,
                original_len: 10
            })
        );

        let one = SamplingPlan {
            bandwidth: 0.1,
            decimation: 1,
            fraction: 0.9,
        };
        assert_eq!(subsample(&x, &one).unwrap().row_slice(0), x.row_slice(0));

        let big = ens(vec![vec![1.0; 500]]);
        assert_eq!(subsample(&big, &plan).unwrap().len(), 250);
    }

    #[test]
    fn identity_reconstruction() {
        let x = ens(vec![vec![0.3, -1.0, 2.5, 4.0]]);
        let plan = SamplingPlan {
            bandwidth: 0.5,
            decimation: 1,
            fraction: 1.0,
        };
        let y = sinc_reconstruct(&subsample(&x, &plan).unwrap(), &plan, 4).unwrap();
        assert_eq!(y.data(), x.data());
    }

    #[test]
    fn bandlimited_cosine() {
        let k = 512;
        let x = ens(vec![(0..k).map(|t| (0.2 * PI * t as f64).cos()).collect()]);
        let plan = SamplingPlan {
            bandwidth: 0.2 * PI,
            decimation: 2,
            fraction: 1.0,
        };
        let y = sinc_reconstruct(&subsample(&x, &plan).unwrap(), &plan, k).unwrap();
        let interior = k / 4..3 * k / 4;
        let err = interior
            .map(|t| (x.row_slice(0)[t] - y.row_slice(0)[t]).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-2, "{err}");
    }

    #[test]
    fn reconstruction_rejects_wrong_length() {
        let s = ens(vec![vec![1.0; 5]]);
        let plan = SamplingPlan {
            bandwidth: 0.1,
            decimation: 2,
            fraction: 0.9,
        };
        assert!(sinc_reconstruct(&s, &plan, 12).is_err());
        assert!(sinc_reconstruct(&s, &plan, 10).is_ok());
    }

    #[test]
    fn mse_extremes() {
        let x = ens(vec![vec![1.0, 2.0], vec![0.0, 0.0]]);
        let r = reconstruction_mse(&x, &x).unwrap();
        assert_eq!(r.pooled_percent, 0.0);
        assert_eq!(r.per_realization, vec![Some(0.0), None]);
        let zero = ens(vec![vec![0.0, 0.0], vec![0.0, 0.0]]);
        assert_eq!(reconstruction_mse(&x, &zero).unwrap().pooled_percent, 100.0);
        assert!(matches!(
            reconstruction_mse(&zero, &x),
            Err(Error::ZeroSignal)
        ));
        assert!(reconstruction_mse(&x, &ens(vec![vec![1.0]])).is_err());
    }

    #[test]
    fn out_of_band_mass() {
        let s = Spectrum::new(FrequencyGrid::dft(4), vec![1.0, 1.0, 2.0, 1.0]).unwrap();
        // |ω| = π/2 and π lie beyond 0.1
        assert!((out_of_band_fraction(&s, 0.1).unwrap() - 0.6).abs() < 1e-15);
        assert_eq!(out_of_band_fraction(&s, PI).unwrap(), 0.0);
    }
}
