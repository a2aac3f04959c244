//! Angular frequency grids on `[-π, π)`.

use std::f64::consts::PI;

/// A grid of angular frequencies.
///
/// `Dft(n)` is the `n`-point DFT grid in centered (fftshift) order,
/// `ω_m = 2π(m − ⌊n/2⌋)/n`. Operations recognise it and use FFTs; any
/// other grid falls back to direct sums.
#[derive(Debug, Clone, PartialEq)]
pub enum FrequencyGrid {
    Dft(usize),
    Custom(Vec<f64>),
}

impl FrequencyGrid {
    pub fn dft(n: usize) -> Self {
        FrequencyGrid::Dft(n)
    }

    /// `n` equally spaced points starting at `-π`.
    pub fn uniform(n: usize) -> Self {
        if n.is_multiple_of(2) {
            return FrequencyGrid::Dft(n);
        }
        FrequencyGrid::Custom(
            (0..n)
                .map(|m| -PI + 2.0 * PI * m as f64 / n as f64)
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        match self {
            FrequencyGrid::Dft(n) => *n,
            FrequencyGrid::Custom(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn omega(&self, m: usize) -> f64 {
        match self {
            FrequencyGrid::Dft(n) => dft_omega(m, *n),
            FrequencyGrid::Custom(v) => v[m],
        }
    }

    pub fn omegas(&self) -> Vec<f64> {
        (0..self.len()).map(|m| self.omega(m)).collect()
    }

    pub fn dft_len(&self) -> Option<usize> {
        match self {
            FrequencyGrid::Dft(n) => Some(*n),
            FrequencyGrid::Custom(_) => None,
        }
    }

    /// Index of the grid point at `-ω`, if the grid contains it.
    pub fn mirror_index(&self, m: usize) -> Option<usize> {
        match self {
            FrequencyGrid::Dft(n) => {
                let n = *n;
                let half = n / 2;
                // centered offset s = m - half; mirror is -s
                let s = m as isize - half as isize;
                let mirrored = -s + half as isize;
                (0..n as isize)
                    .contains(&mirrored)
                    .then_some(mirrored as usize)
            }
            FrequencyGrid::Custom(v) => {
                let target = -v[m];
                v.iter()
                    .position(|&w| (w - target).abs() <= 1e-12 * (1.0 + target.abs()))
            }
        }
    }

    pub fn check_range(&self) -> crate::Result<()> {
        for w in self.omegas() {
            if !(-PI - 1e-12..PI).contains(&w) {
                return Err(crate::Error::invalid(format!(
                    "grid frequency {w} outside [-pi, pi)"
                )));
            }
        }
        Ok(())
    }
}

/// Centered DFT frequency for index `m` of an `n`-point grid.
pub fn dft_omega(m: usize, n: usize) -> f64 {
    2.0 * PI * (m as f64 - (n / 2) as f64) / n as f64
}

/// Natural FFT bin that lands at centered index `m`.
pub fn centered_to_bin(m: usize, n: usize) -> usize {
    (m + n - n / 2) % n
}

/// Reorder a natural-order FFT output into centered order.
pub fn fftshift<T: Copy>(natural: &[T]) -> Vec<T> {
    let n = natural.len();
    (0..n).map(|m| natural[centered_to_bin(m, n)]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dft_grid_is_centered() {
        let g = FrequencyGrid::dft(4);
        assert_eq!(g.omegas(), vec![-PI, -PI / 2.0, 0.0, PI / 2.0]);
        let g = FrequencyGrid::dft(5);
        let w = g.omegas();
        assert!((w[0] + 4.0 * PI / 5.0).abs() < 1e-15);
        assert_eq!(w[2], 0.0);
    }

    #[test]
    fn shift_matches_bins() {
        let natural: Vec<usize> = (0..6).collect();
        assert_eq!(fftshift(&natural), vec![3, 4, 5, 0, 1, 2]);
        let natural: Vec<usize> = (0..5).collect();
        assert_eq!(fftshift(&natural), vec![3, 4, 0, 1, 2]);
    }

    #[test]
    fn mirrors() {
        let g = FrequencyGrid::dft(4);
        assert_eq!(g.mirror_index(0), None); // -π has no partner in [-π, π)
        assert_eq!(g.mirror_index(1), Some(3));
        assert_eq!(g.mirror_index(2), Some(2));
        let g = FrequencyGrid::dft(5);
        assert_eq!(g.mirror_index(0), Some(4));
        let c = FrequencyGrid::Custom(vec![-1.0, 0.0, 1.0]);
        assert_eq!(c.mirror_index(0), Some(2));
    }
}
