//! Double integrals over the torus whose kernel depends only on `t₁ - t₂`.

use rayon::prelude::*;

use crate::spectrum::{fold_angle, pairwise_sum};

/// `(1/n²) Σ_{d=1}^{n-1} kernel(‖τ_d‖) Σ_j pair(j, j+d mod n)` with
/// `τ_d = 2πd/n`: the rectangle rule for `∬ pair(t₁,t₂) kernel(‖t₁-t₂‖)`
/// with the mean-value measure and the diagonal excluded.
///
/// Shifts are evaluated in parallel and reduced in a fixed order, so the
/// result does not depend on the worker count.
pub fn shift_double_integral<K, P>(n: usize, kernel: K, pair: P) -> f64
where
    K: Fn(f64) -> f64 + Sync,
    P: Fn(usize, usize) -> f64 + Sync,
{
    let per_shift: Vec<f64> = (1..n)
        .into_par_iter()
        .map(|d| {
            let tau = fold_angle(std::f64::consts::TAU * d as f64 / n as f64).abs();
            let k = kernel(tau);
            if k == 0.0 {
                return 0.0;
            }
            let row: Vec<f64> = (0..n).map(|j| pair(j, (j + d) % n)).collect();
            k * pairwise_sum(&row)
        })
        .collect();
    pairwise_sum(&per_shift) / (n as f64 * n as f64)
}

/// Same as [`shift_double_integral`] but evaluates several integrands that
/// share the kernel in one sweep.
pub fn shift_double_integrals<K, P, const M: usize>(n: usize, kernel: K, pair: P) -> [f64; M]
where
    K: Fn(f64) -> f64 + Sync,
    P: Fn(usize, usize) -> [f64; M] + Sync,
{
    let per_shift: Vec<[f64; M]> = (1..n)
        .into_par_iter()
        .map(|d| {
            let tau = fold_angle(std::f64::consts::TAU * d as f64 / n as f64).abs();
            let k = kernel(tau);
            let mut rows = vec![[0.0; M]; n];
            for (j, r) in rows.iter_mut().enumerate() {
                *r = pair(j, (j + d) % n);
            }
            std::array::from_fn(|i| {
                let col: Vec<f64> = rows.iter().map(|r| r[i]).collect();
                k * pairwise_sum(&col)
            })
        })
        .collect();
    let norm = n as f64 * n as f64;
    std::array::from_fn(|i| {
        let col: Vec<f64> = per_shift.iter().map(|r| r[i]).collect();
        pairwise_sum(&col) / norm
    })
}
