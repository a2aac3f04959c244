use num_complex::Complex64;

use crate::grid::FrequencyGrid;
use crate::{Error, Result};

/// Relative slack for spectral symmetry checks.
pub const SYMMETRY_RTOL: f64 = 1e-6;
/// Negative values down to `-NEGATIVE_RTOL · max` count as numerical noise.
pub const NEGATIVE_RTOL: f64 = 1e-9;

/// A 1-D power spectral density on a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: FrequencyGrid,
    values: Vec<f64>,
    clipped: usize,
}

impl Spectrum {
    pub fn new(grid: FrequencyGrid, values: Vec<f64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} values", grid.len()),
                got: format!("{} values", values.len()),
            });
        }
        Ok(Spectrum {
            grid,
            values,
            clipped: 0,
        })
    }

    pub(crate) fn with_clipped(mut self, clipped: usize) -> Self {
        self.clipped = clipped;
        self
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn omegas(&self) -> Vec<f64> {
        self.grid.omegas()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Bins that were clipped up to `-ε_num` when the spectrum was formed.
    pub fn clipped_bins(&self) -> usize {
        self.clipped
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// `ε_num = 1e-9 · max value`.
    pub fn epsilon(&self) -> f64 {
        NEGATIVE_RTOL * self.max_value()
    }

    /// Checks finiteness, near-nonnegativity and `S(−ω) = S(ω)` where the
    /// grid holds both points.
    pub fn validate(&self) -> Result<()> {
        let eps = self.epsilon();
        for (m, &v) in self.values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::InvariantViolation(format!(
                    "spectrum bin {m} is {v}"
                )));
            }
            if v < -eps {
                return Err(Error::InvariantViolation(format!(
                    "spectrum bin {m} = {v:e} below -{eps:e}"
                )));
            }
            if let Some(mm) = self.grid.mirror_index(m) {
                let w = self.values[mm];
                let scale = v.abs().max(w.abs()).max(eps);
                if (v - w).abs() > SYMMETRY_RTOL * scale {
                    return Err(Error::InvariantViolation(format!(
                        "spectrum not symmetric: bin {m} = {v:e}, mirror {mm} = {w:e}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `max_m |self − other|` on a shared grid.
    pub fn sup_distance(&self, other: &Spectrum) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{} bins", self.len()),
                got: format!("{} bins", other.len()),
            });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// Generalized PSD `K(u, v)` on a grid pair.
#[derive(Debug, Clone, PartialEq)]
pub struct BiSpectrum {
    u_grid: FrequencyGrid,
    v_grid: FrequencyGrid,
    /// Row-major, `u` index outer.
    values: Vec<Complex64>,
}

impl BiSpectrum {
    pub fn new(
        u_grid: FrequencyGrid,
        v_grid: FrequencyGrid,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        if values.len() != u_grid.len() * v_grid.len() {
            return Err(Error::ShapeMismatch {
                expected: format!("{}x{}", u_grid.len(), v_grid.len()),
                got: format!("{} values", values.len()),
            });
        }
        Ok(BiSpectrum {
            u_grid,
            v_grid,
            values,
        })
    }

    pub fn u_grid(&self) -> &FrequencyGrid {
        &self.u_grid
    }

    pub fn v_grid(&self) -> &FrequencyGrid {
        &self.v_grid
    }

    pub fn get(&self, iu: usize, iv: usize) -> Complex64 {
        self.values[iu * self.v_grid.len() + iv]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `K(u, v) = conj(K(v, u))`, checked when both grids are the same.
    pub fn validate(&self) -> Result<()> {
        if let Some((i, z)) = self
            .values
            .iter()
            .enumerate()
            .find(|(_, z)| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::InvariantViolation(format!(
                "generalized PSD entry {i} is {z}"
            )));
        }
        if self.u_grid != self.v_grid {
            return Ok(());
        }
        let n = self.u_grid.len();
        let scale = self.max_abs();
        for iu in 0..n {
            for iv in (iu + 1)..n {
                let a = self.get(iu, iv);
                let b = self.get(iv, iu).conj();
                if (a - b).norm() > SYMMETRY_RTOL * scale {
                    return Err(Error::InvariantViolation(format!(
                        "generalized PSD not Hermitian at ({iu}, {iv}): {a} vs {b}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A real sequence on lags `-max_lag..=max_lag`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagFunction {
    max_lag: usize,
    values: Vec<f64>,
}

impl LagFunction {
    /// `values[i]` is the value at lag `i - max_lag`.
    pub fn new(max_lag: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != 2 * max_lag + 1 {
            return Err(Error::ShapeMismatch {
                expected: format!("{} lags", 2 * max_lag + 1),
                got: format!("{} values", values.len()),
            });
        }
        Ok(LagFunction { max_lag, values })
    }

    /// Builds a symmetric function from its values at lags `0..=max_lag`.
    pub fn symmetric(one_sided: &[f64]) -> Self {
        let max_lag = one_sided.len().saturating_sub(1);
        let values = one_sided
            .iter()
            .rev()
            .chain(&one_sided[1..])
            .copied()
            .collect();
        LagFunction { max_lag, values }
    }

    pub fn max_lag(&self) -> usize {
        self.max_lag
    }

    pub fn lags(&self) -> impl Iterator<Item = isize> + '_ {
        let m = self.max_lag as isize;
        -m..=m
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value at `lag`, zero outside the support.
    pub fn at(&self, lag: isize) -> f64 {
        if lag.unsigned_abs() > self.max_lag {
            return 0.0;
        }
        self.values[(lag + self.max_lag as isize) as usize]
    }

    pub fn is_symmetric(&self, atol: f64) -> bool {
        (1..=self.max_lag as isize).all(|t| (self.at(t) - self.at(-t)).abs() <= atol)
    }
}
