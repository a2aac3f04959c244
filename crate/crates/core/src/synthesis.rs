//! Synthesis of filtered nonstationary white Gaussian noise.
//!
//! Realization `p` of the driving noise draws its standard normals from the
//! ChaCha8 stream `p` of a generator keyed by the ensemble seed, so every
//! realization depends only on `(seed, p)` and generation parallelises over
//! realizations without changing a single bit of output.

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::filter::LtiFilter;
use crate::profile::VarianceProfile;
use crate::{Ensemble, Error, Result};

/// Coupling between successive realizations of the driving noise.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum TemporalModel {
    #[default]
    Iid,
    /// Per-sample AR-1 chain across realizations, normalised to unit marginal variance.
    Ar1 { rho: f64 },
}

impl TemporalModel {
    pub fn ar1(rho: f64) -> Result<Self> {
        if rho.is_nan() || rho.abs() >= 1.0 {
            return Err(Error::invalid(format!(
                "AR-1 coefficient {rho} must satisfy |rho| < 1"
            )));
        }
        Ok(TemporalModel::Ar1 { rho })
    }
}

impl fmt::Display for TemporalModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TemporalModel::Iid => f.write_str("iid"),
            TemporalModel::Ar1 { rho } => write!(f, "ar1:{rho}"),
        }
    }
}

impl FromStr for TemporalModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "iid" => Ok(TemporalModel::Iid),
            other => match other.strip_prefix("ar1:") {
                Some(rho) => {
                    let rho: f64 = rho
                        .parse()
                        .map_err(|_| Error::invalid(format!("bad AR-1 coefficient '{rho}'")))?;
                    TemporalModel::ar1(rho)
                }
                None => Err(Error::invalid(format!(
                    "temporal model '{other}' is not 'iid' or 'ar1:<rho>'"
                ))),
            },
        }
    }
}

/// First `⌊K/3⌋` samples at variance 1, the rest at 0.1.
pub fn step_variance_profile(len: usize) -> Result<VarianceProfile> {
    if len < 3 {
        return Err(Error::invalid(format!(
            "profile length {len} must be at least 3"
        )));
    }
    let high = len / 3;
    let values = (0..len).map(|k| if k < high { 1.0 } else { 0.1 }).collect();
    VarianceProfile::new(values)
}

fn normal_row(seed: u64, p: usize, out: &mut [f64]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(p as u64);
    for v in out.iter_mut() {
        *v = StandardNormal.sample(&mut rng);
    }
}

/// Draws `realizations` rows of zero-mean Gaussian noise with per-sample
/// variance `profile`.
pub fn generate_noise(
    profile: &VarianceProfile,
    realizations: usize,
    temporal: TemporalModel,
    seed: u64,
) -> Result<Ensemble> {
    if realizations == 0 {
        return Err(Error::invalid("need at least one realization"));
    }
    if let TemporalModel::Ar1 { rho } = temporal {
        TemporalModel::ar1(rho)?;
    }
    let k = profile.len();
    let mut z = vec![0.0; realizations * k];
    z.par_chunks_mut(k)
        .enumerate()
        .for_each(|(p, row)| normal_row(seed, p, row));

    if let TemporalModel::Ar1 { rho } = temporal {
        let innovation = (1.0 - rho * rho).sqrt();
        for p in 1..realizations {
            let (prev, cur) = z.split_at_mut(p * k);
            let prev = &prev[(p - 1) * k..];
            for (c, u) in cur[..k].iter_mut().zip(prev) {
                *c = rho * u + innovation * *c;
            }
        }
    }

    let sigma: Vec<f64> = profile.values().iter().map(|v| v.sqrt()).collect();
    z.par_chunks_mut(k).for_each(|row| {
        for (v, s) in row.iter_mut().zip(&sigma) {
            *v *= s;
        }
    });
    let data = Array2::from_shape_vec((realizations, k), z).expect("shape");
    Ok(Ensemble::from_parts(data, seed, None))
}

/// Runs one realization through the filter recursion with zero initial conditions.
pub fn filter_signal(filter: &LtiFilter, input: &[f64], out: &mut [f64]) {
    let ar = filter.ar();
    let ma = filter.ma();
    for k in 0..input.len() {
        let mut acc = 0.0;
        for (i, &b) in ma.iter().enumerate().take(k + 1) {
            acc += b * input[k - i];
        }
        for (j, &a) in ar.iter().enumerate().take(k) {
            acc += a * out[k - 1 - j];
        }
        out[k] = acc;
    }
}

/// Filters every realization independently; output keeps the start-up transient.
pub fn apply_filter(noise: &Ensemble, filter: &LtiFilter) -> Ensemble {
    let k = noise.len();
    let input = noise.data().as_slice().expect("standard layout");
    let mut out = vec![0.0; input.len()];
    out.par_chunks_mut(k)
        .zip(input.par_chunks(k))
        .for_each(|(o, i)| filter_signal(filter, i, o));
    let data = Array2::from_shape_vec(noise.data().dim(), out).expect("shape");
    Ensemble::from_parts(data, noise.seed(), None)
}

/// Noise generation followed by filtering. With `warmup > 0` the profile is
/// extended backwards by its first value, `warmup` extra samples are
/// synthesized and then discarded, leaving a length-`profile.len()` ensemble
/// closer to steady state.
pub fn synthesize(
    profile: &VarianceProfile,
    filter: &LtiFilter,
    realizations: usize,
    temporal: TemporalModel,
    seed: u64,
    warmup: usize,
) -> Result<Ensemble> {
    if warmup == 0 {
        let noise = generate_noise(profile, realizations, temporal, seed)?;
        return Ok(apply_filter(&noise, filter));
    }
    let extended = profile.with_prefix(warmup);
    let noise = generate_noise(&extended, realizations, temporal, seed)?;
    apply_filter(&noise, filter).skip(warmup)
}
