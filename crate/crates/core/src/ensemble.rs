use ndarray::{Array2, ArrayView1};

use crate::{Error, Result};

/// Bookkeeping attached to an ensemble produced by decimation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decimation {
    pub factor: usize,
    pub original_len: usize,
}

/// `P` realizations of a length-`K` real signal, one realization per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    data: Array2<f64>,
    seed: u64,
    decimation: Option<Decimation>,
}

impl Ensemble {
    /// Wraps a `P × K` matrix. Rejects empty shapes and non-finite samples.
    pub fn new(data: Array2<f64>, seed: u64) -> Result<Self> {
        let (p, k) = data.dim();
        if p == 0 || k == 0 {
            return Err(Error::invalid(format!(
                "ensemble must be non-empty, got {p}x{k}"
            )));
        }
        if let Some(((row, col), v)) = data.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite sample {v} at realization {row}, index {col}"
            )));
        }
        Ok(Ensemble {
            data,
            seed,
            decimation: None,
        })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>, seed: u64) -> Result<Self> {
        let p = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != k) {
            return Err(Error::ShapeMismatch {
                expected: format!("{k} samples per realization"),
                got: format!("{} samples in realization {bad}", rows[bad].len()),
            });
        }
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        let data =
            Array2::from_shape_vec((p, k), flat).map_err(|e| Error::invalid(e.to_string()))?;
        Ensemble::new(data, seed)
    }

    pub(crate) fn from_parts(data: Array2<f64>, seed: u64, decimation: Option<Decimation>) -> Self {
        Ensemble {
            data,
            seed,
            decimation,
        }
    }

    pub fn with_decimation(mut self, decimation: Decimation) -> Self {
        self.decimation = Some(decimation);
        self
    }

    /// Number of realizations.
    pub fn realizations(&self) -> usize {
        self.data.nrows()
    }

    /// Samples per realization.
    pub fn len(&self) -> usize {
        self.data.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn decimation(&self) -> Option<Decimation> {
        self.decimation
    }

    pub fn data(&self) -> &Array2<f64> {
        &self.data
    }

    pub fn into_data(self) -> Array2<f64> {
        self.data
    }

    pub fn row(&self, p: usize) -> ArrayView1<'_, f64> {
        self.data.row(p)
    }

    /// Row `p` as a contiguous slice (rows are stored in standard layout).
    pub fn row_slice(&self, p: usize) -> &[f64] {
        let k = self.len();
        &self.data.as_slice().expect("standard layout")[p * k..(p + 1) * k]
    }

    /// Same realizations truncated to the first `n` samples.
    pub fn window(&self, n: usize) -> Result<Ensemble> {
        if n == 0 {
            return Err(Error::invalid("window length must be at least 1"));
        }
        if n > self.len() {
            return Err(Error::WindowTooLong {
                window: n,
                len: self.len(),
            });
        }
        let data = self.data.slice(ndarray::s![.., ..n]).to_owned();
        Ok(Ensemble {
            data,
            seed: self.seed,
            decimation: None,
        })
    }

    /// Drops the first `n` samples of every realization.
    pub fn skip(&self, n: usize) -> Result<Ensemble> {
        if n >= self.len() {
            return Err(Error::invalid(format!(
                "cannot discard {n} of {} samples",
                self.len()
            )));
        }
        let data = self.data.slice(ndarray::s![.., n..]).to_owned();
        Ok(Ensemble {
            data,
            seed: self.seed,
            decimation: None,
        })
    }

    pub fn same_shape(&self, other: &Ensemble) -> Result<()> {
        if self.data.dim() != other.data.dim() {
            return Err(Error::ShapeMismatch {
                expected: format!("{:?}", self.data.dim()),
                got: format!("{:?}", other.data.dim()),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(Ensemble::from_rows(vec![vec![1.0, f64::NAN]], 0).is_err());
        assert!(Ensemble::from_rows(vec![], 0).is_err());
        assert!(Ensemble::from_rows(vec![vec![1.0], vec![1.0, 2.0]], 0).is_err());
    }

    #[test]
    fn windowing() {
        let e = Ensemble::from_rows(vec![vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]], 9).unwrap();
        let w = e.window(2).unwrap();
        assert_eq!(w.row_slice(1), &[4.0, 5.0]);
        assert!(matches!(e.window(4), Err(Error::WindowTooLong { .. })));
        assert_eq!(e.skip(1).unwrap().row_slice(0), &[2.0, 3.0]);
    }
}
