//! Fixed-order reductions.
//!
//! Parallel stages produce per-realization partial results in index order;
//! these helpers combine them with a pairwise tree whose shape depends only
//! on the number of inputs, so results do not depend on the thread count.

/// Pairwise sum of scalars.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Elementwise pairwise sum of equal-length vectors.
pub fn pairwise_sum_vecs(parts: &[Vec<f64>], len: usize) -> Vec<f64> {
    match parts.len() {
        0 => vec![0.0; len],
        1 => parts[0].clone(),
        n => {
            let (a, b) = parts.split_at(n / 2);
            let mut left = pairwise_sum_vecs(a, len);
            let right = pairwise_sum_vecs(b, len);
            for (l, r) in left.iter_mut().zip(&right) {
                *l += r;
            }
            left
        }
    }
}
