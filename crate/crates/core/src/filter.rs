//! Stable LTI filters given by feedback (`ar`) and feedforward (`ma`) coefficients:
//!
//! ```text
//! x[k] = Σ_i ma[i]·w[k−i] + Σ_j ar[j]·x[k−1−j]
//! H(ω) = (Σ_i ma[i] e^{−jωi}) / (1 − Σ_j ar[j] e^{−jω(j+1)})
//! ```

use num_complex::Complex64;

use crate::grid::FrequencyGrid;
use crate::{Error, Result};

pub const DEFAULT_TRUNCATION_TOL: f64 = 1e-10;
pub const DEFAULT_LENGTH_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct LtiFilter {
    ar: Vec<f64>,
    ma: Vec<f64>,
    impulse_response: Vec<f64>,
    truncation_tol: f64,
}

impl LtiFilter {
    /// Feedback coefficients `a_1..a_q`.
    pub fn ar(&self) -> &[f64] {
        &self.ar
    }

    /// Feedforward coefficients `b_0..b_r`.
    pub fn ma(&self) -> &[f64] {
        &self.ma
    }

    /// Truncated impulse response `h[0..L]`.
    pub fn impulse_response(&self) -> &[f64] {
        &self.impulse_response
    }

    pub fn truncation_tol(&self) -> f64 {
        self.truncation_tol
    }

    /// `Σ h[k]²` over the truncated support.
    pub fn energy(&self) -> f64 {
        crate::reduce::pairwise_sum(
            &self
                .impulse_response
                .iter()
                .map(|h| h * h)
                .collect::<Vec<_>>(),
        )
    }

    pub fn is_identity(&self) -> bool {
        self.ar.iter().all(|&a| a == 0.0)
            && self.ma.first() == Some(&1.0)
            && self.ma[1..].iter().all(|&b| b == 0.0)
    }

    /// Exact transfer function at one frequency.
    pub fn response_at(&self, omega: f64) -> Complex64 {
        let num: Complex64 = self
            .ma
            .iter()
            .enumerate()
            .map(|(i, &b)| b * Complex64::from_polar(1.0, -omega * i as f64))
            .sum();
        let den: Complex64 = Complex64::new(1.0, 0.0)
            - self
                .ar
                .iter()
                .enumerate()
                .map(|(j, &a)| a * Complex64::from_polar(1.0, -omega * (j + 1) as f64))
                .sum::<Complex64>();
        num / den
    }
}

/// Builds a stable filter and its truncated impulse response with the default length cap.
pub fn make_filter(ar: &[f64], ma: &[f64], truncation_tol: f64) -> Result<LtiFilter> {
    make_filter_capped(ar, ma, truncation_tol, DEFAULT_LENGTH_CAP)
}

/// Like [`make_filter`] with an explicit cap on the impulse-response length.
///
/// The length `L` is the smallest for which the discarded tail satisfies both
/// `sqrt(Σ_{k≥L} h²) ≤ tol · max_{k<L} |h|` (so every dropped sample is below
/// `tol` relative to the peak) and `Σ_{k≥L} h² ≤ tol · Σ h²`. Tail energies
/// are exact, from the observability Gramian of the feedback recursion.
pub fn make_filter_capped(
    ar: &[f64],
    ma: &[f64],
    truncation_tol: f64,
    cap: usize,
) -> Result<LtiFilter> {
    if !(truncation_tol > 0.0 && truncation_tol < 1.0) {
        return Err(Error::invalid(format!(
            "truncation_tol {truncation_tol} not in (0, 1)"
        )));
    }
    if ma.is_empty() {
        return Err(Error::invalid("feedforward coefficients must be non-empty"));
    }
    if ar.iter().chain(ma).any(|c| !c.is_finite()) {
        return Err(Error::invalid("filter coefficients must be finite"));
    }
    check_stability(ar)?;

    let q = ar.len();
    let r = ma.len() - 1;
    let homogeneous_from = q.max(r + 1);
    let gramian = tail_gramian(ar)?;

    let mut h: Vec<f64> = Vec::new();
    let next = |h: &[f64]| {
        let n = h.len();
        let mut v = if n <= r { ma[n] } else { 0.0 };
        for (j, &a) in ar.iter().enumerate() {
            if n > j {
                v += a * h[n - 1 - j];
            }
        }
        v
    };
    while h.len() < homogeneous_from {
        let v = next(&h);
        h.push(v);
    }
    let tail_from_state = |h: &[f64], n: usize| -> f64 {
        if q == 0 {
            return 0.0;
        }
        let s: Vec<f64> = (0..q).map(|i| h[n - 1 - i]).collect();
        let mut acc = 0.0;
        for i in 0..q {
            for j in 0..q {
                acc += s[i] * gramian[i * q + j] * s[j];
            }
        }
        acc.max(0.0)
    };
    let head_tail = tail_from_state(&h, homogeneous_from);
    // suffix energies of the head, so tail(L) for L < homogeneous_from is exact
    let mut head_suffix = vec![head_tail; homogeneous_from + 1];
    for k in (0..homogeneous_from).rev() {
        head_suffix[k] = head_suffix[k + 1] + h[k] * h[k];
    }
    let total = head_suffix[0];

    let mut peak = 0.0f64;
    let mut len = 0;
    loop {
        len += 1;
        if len > cap {
            return Err(Error::NonConvergent { cap });
        }
        if h.len() < len {
            let v = next(&h);
            h.push(v);
        }
        peak = peak.max(h[len - 1].abs());
        let tail = if len <= homogeneous_from {
            head_suffix[len]
        } else {
            tail_from_state(&h, len)
        };
        if tail.sqrt() <= truncation_tol * peak && tail <= truncation_tol * total {
            break;
        }
    }
    h.truncate(len);
    Ok(LtiFilter {
        ar: ar.to_vec(),
        ma: ma.to_vec(),
        impulse_response: h,
        truncation_tol,
    })
}

/// Exact frequency response from the rational form.
pub fn frequency_response(filter: &LtiFilter, grid: &FrequencyGrid) -> Vec<Complex64> {
    (0..grid.len())
        .map(|m| filter.response_at(grid.omega(m)))
        .collect()
}

/// Schur–Cohn step-down test on `1 − a_1 z⁻¹ − … − a_q z⁻q`: all roots lie
/// strictly inside the unit circle iff every reflection coefficient has
/// modulus below one.
fn check_stability(ar: &[f64]) -> Result<()> {
    let mut c: Vec<f64> = std::iter::once(1.0).chain(ar.iter().map(|a| -a)).collect();
    while c.len() > 1 && *c.last().unwrap() == 0.0 {
        c.pop();
    }
    for order in (1..c.len()).rev() {
        let k = c[order];
        if k.is_nan() || k.abs() >= 1.0 {
            return Err(Error::UnstableFilter {
                order,
                reflection: k,
            });
        }
        let denom = 1.0 - k * k;
        let next: Vec<f64> = (0..order)
            .map(|i| (c[i] - k * c[order - i]) / denom)
            .collect();
        c = next;
    }
    Ok(())
}

/// `G = Σ_m (Aᵐ)ᵀ a aᵀ Aᵐ` for the companion matrix `A` of the feedback
/// recursion, by squaring: `G ← G + AᵀGA`, `A ← A²`. Row-major `q × q`.
fn tail_gramian(ar: &[f64]) -> Result<Vec<f64>> {
    let q = ar.len();
    if q == 0 {
        return Ok(Vec::new());
    }
    let mut a = vec![0.0; q * q];
    a[..q].copy_from_slice(ar);
    for i in 1..q {
        a[i * q + i - 1] = 1.0;
    }
    let mut g = vec![0.0; q * q];
    for i in 0..q {
        for j in 0..q {
            g[i * q + j] = ar[i] * ar[j];
        }
    }
    let matmul = |x: &[f64], y: &[f64]| {
        let mut out = vec![0.0; q * q];
        for i in 0..q {
            for l in 0..q {
                let xv = x[i * q + l];
                if xv != 0.0 {
                    for j in 0..q {
                        out[i * q + j] += xv * y[l * q + j];
                    }
                }
            }
        }
        out
    };
    let transpose = |x: &[f64]| {
        let mut out = vec![0.0; q * q];
        for i in 0..q {
            for j in 0..q {
                out[j * q + i] = x[i * q + j];
            }
        }
        out
    };
    for _ in 0..128 {
        let at_g_a = matmul(&matmul(&transpose(&a), &g), &a);
        for (gv, d) in g.iter_mut().zip(&at_g_a) {
            *gv += d;
        }
        a = matmul(&a, &a);
        let norm: f64 = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-13 {
            return Ok(g);
        }
        if !norm.is_finite() {
            break;
        }
    }
    Err(Error::NonConvergent {
        cap: DEFAULT_LENGTH_CAP,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn identity_system() {
        let f = make_filter(&[], &[1.0], DEFAULT_TRUNCATION_TOL).unwrap();
        assert_eq!(f.impulse_response(), &[1.0]);
        assert!(f.is_identity());
        for w in [-3.0, 0.0, 1.0] {
            assert_eq!(f.response_at(w), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn ar2_head() {
        let f = make_filter(&[0.8, 0.1], &[1.0], DEFAULT_TRUNCATION_TOL).unwrap();
        let h = f.impulse_response();
        assert_eq!(h[0], 1.0);
        assert_eq!(h[1], 0.8);
        assert_relative_eq!(h[2], 0.74, epsilon = 1e-15);
        assert!(*h.last().unwrap() < 1e-10);
    }

    #[test]
    fn ar2_response() {
        let f = make_filter(&[0.8, 0.1], &[1.0], DEFAULT_TRUNCATION_TOL).unwrap();
        let h0 = f.response_at(0.0);
        assert_relative_eq!(h0.re, 10.0, epsilon = 1e-12);
        assert_relative_eq!(h0.norm_sqr(), 100.0, epsilon = 1e-10);
        let hpi = f.response_at(std::f64::consts::PI);
        assert_relative_eq!(hpi.re, 1.0 / 1.7, epsilon = 1e-12);
        assert!(hpi.im.abs() < 1e-12);
    }

    #[test]
    fn unstable_and_marginal() {
        assert!(matches!(
            make_filter(&[1.1], &[1.0], 1e-10),
            Err(Error::UnstableFilter { .. })
        ));
        assert!(matches!(
            make_filter(&[1.0], &[1.0], 1e-10),
            Err(Error::UnstableFilter { .. })
        ));
        // z² − 0.5z − 0.6 has a root at ≈1.06
        assert!(make_filter(&[0.5, 0.6], &[1.0], 1e-10).is_err());
        // complex pair of modulus sqrt(0.95)
        assert!(make_filter(&[1.0, -0.95], &[1.0], 1e-10).is_ok());
    }

    #[test]
    fn bad_arguments() {
        assert!(make_filter(&[0.5], &[], 1e-10).is_err());
        assert!(make_filter(&[0.5], &[1.0], 0.0).is_err());
        assert!(make_filter(&[0.5], &[1.0], 1.0).is_err());
    }

    #[test]
    fn length_cap() {
        assert!(matches!(
            make_filter_capped(&[0.999], &[1.0], 1e-10, 1000),
            Err(Error::NonConvergent { cap: 1000 })
        ));
    }

    #[test]
    fn first_order_tail_is_exact() {
        // h[k] = 0.5^k, tail energy beyond L is 0.25^L / 0.75
        let f = make_filter(&[0.5], &[1.0], 1e-6).unwrap();
        let l = f.impulse_response().len();
        let tail = 0.25f64.powi(l as i32) / 0.75;
        assert!(tail.sqrt() <= 1e-6);
        let prev = 0.25f64.powi(l as i32 - 1) / 0.75;
        assert!(prev.sqrt() > 1e-6);
    }

    fn dtft(h: &[f64], w: f64) -> Complex64 {
        h.iter()
            .enumerate()
            .map(|(k, &v)| v * Complex64::from_polar(1.0, -w * k as f64))
            .sum()
    }

    proptest! {
        #[test]
        fn truncated_dft_matches_rational_form(
            r1 in -0.9f64..0.9, r2 in -0.9f64..0.9, b1 in -0.5f64..0.5,
        ) {
            // real poles r1, r2 -> a1 = r1 + r2, a2 = -r1 r2
            let ar = [r1 + r2, -r1 * r2];
            let tol = 1e-10;
            let f = make_filter(&ar, &[1.0, b1], tol).unwrap();
            let abs_sum: f64 = f.impulse_response().iter().map(|v| v.abs()).sum();
            prop_assert!(abs_sum.is_finite());
            let grid = FrequencyGrid::dft(64);
            let exact = frequency_response(&f, &grid);
            for (m, hv) in exact.iter().enumerate() {
                let approx = dtft(f.impulse_response(), grid.omega(m));
                prop_assert!((approx - hv).norm() <= 10.0 * tol * hv.norm().max(1e-300),
                    "bin {} {} vs {}", m, approx, hv);
            }
        }
    }
}
