use crate::{Error, Result};

/// Per-sample variance `σ_w²[k]` of nonstationary white noise.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceProfile {
    values: Vec<f64>,
    mean_variance: f64,
}

impl VarianceProfile {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("variance profile must be non-empty"));
        }
        if let Some((k, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::invalid(format!(
                "variance {v} at index {k} must be finite and >= 0"
            )));
        }
        let mean_variance = crate::reduce::pairwise_sum(&values) / values.len() as f64;
        Ok(VarianceProfile {
            values,
            mean_variance,
        })
    }

    pub fn constant(len: usize, variance: f64) -> Result<Self> {
        VarianceProfile::new(vec![variance; len])
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

    /// Arithmetic mean of the profile, `σ̄_w²`.
    pub fn mean_variance(&self) -> f64 {
        self.mean_variance
    }

    /// Largest variance, `σ²_{w,max}`.
    pub fn max_variance(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Profile of length `len + n` whose first `n` entries repeat the first value.
    pub fn with_prefix(&self, n: usize) -> VarianceProfile {
        let mut values = vec![self.values[0]; n];
        values.extend_from_slice(&self.values);
        VarianceProfile::new(values).expect("extension of a valid profile")
    }
}
