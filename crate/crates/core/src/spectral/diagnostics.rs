use serde::Serialize;

use super::{max_abs_autocorrelation, AutocorrelationMatrix};

/// Numerical proxies for the two hypotheses of the nonstationary
/// Wiener–Khinchin identity: a uniform bound on `R(t, t)` and summability of
/// the maximum absolute autocorrelation `R^m(τ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    /// `max_t R(t, t)`.
    pub c_hat: f64,
    /// `Σ_τ R^m(τ)`.
    pub rm_sum: f64,
    pub pass: bool,
    /// First non-finite entry `(t₁, t₂)`, if any.
    pub non_finite_at: Option<(usize, usize)>,
}

pub fn check_assumptions(r: &AutocorrelationMatrix) -> AssumptionReport {
    let non_finite_at = r
        .matrix()
        .indexed_iter()
        .find(|(_, v)| !v.is_finite())
        .map(|(ix, _)| ix);
    let k = r.len();
    let c_hat = (0..k).map(|t| r.get(t, t)).fold(f64::NEG_INFINITY, |a, b| {
        if b.is_nan() || a.is_nan() {
            f64::NAN
        } else {
            a.max(b)
        }
    });
    let rm_sum: f64 = if non_finite_at.is_some() {
        f64::NAN
    } else {
        max_abs_autocorrelation(r).values().iter().sum()
    };
    let pass = non_finite_at.is_none() && c_hat.is_finite() && rm_sum.is_finite();
    AssumptionReport {
        c_hat,
        rm_sum,
        pass,
        non_finite_at,
    }
}
