//! The compactly supported profile `g_s`, the kernel
//! `K_{N,s}(t) = Σ g_s(n/N) e^{int}`, the shifted weight `Δ_{N,s}`, and the
//! sums `I_N`, `J_N` with their integral forms.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degree::PhaseLift;
use crate::error::{Error, Result};
use crate::norms::capped_kernel;
use crate::quadrature::shift_double_integral;
use crate::spectrum::{analyze_full, fold_angle, pairwise_sum, CircleSamples, FourierCoeffs};

/// Points at which positivity of the blend is checked on construction.
const POSITIVITY_GRID: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    n: u64,
    s: f64,
    /// `c₀ + c₂x² + c₄x⁴ + c₆x⁶` on `|x| < 1`.
    blend: [f64; 4],
}

impl KernelSpec {
    pub fn new(n: u64, s: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("kernel scale N must be positive"));
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::invalid(format!(
                "kernel exponent {s} outside (0, 1)"
            )));
        }
        // even sextic matching (2-x)^{2s} to third order at x = 1
        let s2 = s * s;
        let blend = [
            (2.0 * s2 * s + 6.0 * s2 + 13.0 * s + 12.0) / 12.0,
            -s * (2.0 * s2 + 4.0 * s + 5.0) / 4.0,
            s * (2.0 * s2 + 2.0 * s + 1.0) / 4.0,
            -s * (2.0 * s2 + 1.0) / 12.0,
        ];
        let spec = Self { n, s, blend };
        let min = (0..=POSITIVITY_GRID)
            .map(|i| spec.blend_at(i as f64 / POSITIVITY_GRID as f64))
            .fold(f64::INFINITY, f64::min);
        if !(min > 0.0) {
            return Err(Error::precondition(format!(
                "blend not positive on [0,1]: min {min}"
            )));
        }
        Ok(spec)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn blend(&self) -> [f64; 4] {
        self.blend
    }

    fn blend_at(&self, x: f64) -> f64 {
        let x2 = x * x;
        self.blend[0] + x2 * (self.blend[1] + x2 * (self.blend[2] + x2 * self.blend[3]))
    }

    /// Constant of the majorant `N (1 ∧ (N‖t‖)^{-1-2s})`.
    pub fn majorant(&self, t: f64) -> f64 {
        let n = self.n as f64;
        let d = fold_angle(t).abs();
        n * (n * d).powf(-1.0 - 2.0 * self.s).min(1.0)
    }
}

/// `g_s(x)`.
pub fn gs_eval(spec: &KernelSpec, x: f64) -> f64 {
    let a = x.abs();
    if a < 1.0 {
        spec.blend_at(a)
    } else if a <= 2.0 {
        (2.0 - a).powf(2.0 * spec.s)
    } else {
        0.0
    }
}

/// `Δ_{N,s}(n) = N^{2s} g_s(n/N - 2)`: equal to `n^{2s}` on `[0, N]` and
/// supported on `[0, 4N]`.
pub fn delta_ns(spec: &KernelSpec, n: i64) -> f64 {
    let big = spec.n as f64;
    if n <= 0 || n >= 4 * spec.n as i64 {
        return 0.0;
    }
    if n as u64 <= spec.n {
        return (n as f64).powf(2.0 * spec.s);
    }
    big.powf(2.0 * spec.s) * gs_eval(spec, n as f64 / big - 2.0)
}

/// `K_{N,s}(t)` by direct summation over `|n| ≤ 2N`, returned as a complex
/// value so that the vanishing imaginary part can be observed.
pub fn kns_complex(spec: &KernelSpec, t: f64) -> Complex64 {
    let big = spec.n as f64;
    let terms: Vec<Complex64> = (-2 * spec.n as i64..=2 * spec.n as i64)
        .map(|n| Complex64::from_polar(gs_eval(spec, n as f64 / big), n as f64 * t))
        .collect();
    let re: Vec<f64> = terms.iter().map(|z| z.re).collect();
    let im: Vec<f64> = terms.iter().map(|z| z.im).collect();
    Complex64::new(pairwise_sum(&re), pairwise_sum(&im))
}

/// Real form `g(0) + 2 Σ_{n=1}^{2N} g(n/N) cos nt`.
pub fn kns(spec: &KernelSpec, t: f64) -> f64 {
    let big = spec.n as f64;
    let terms: Vec<f64> = (1..=2 * spec.n)
        .map(|n| gs_eval(spec, n as f64 / big) * (n as f64 * t).cos())
        .collect();
    gs_eval(spec, 0.0) + 2.0 * pairwise_sum(&terms)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelTable {
    pub n: u64,
    pub s: f64,
    pub t: Vec<f64>,
    pub k: Vec<f64>,
    pub imag: Vec<f64>,
    pub majorant: Vec<f64>,
    pub ratio: Vec<f64>,
    /// `max |K| / majorant` over the table.
    pub fitted_c: f64,
}

impl KernelTable {
    pub fn max_imag(&self) -> f64 {
        self.imag.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    /// Whether `|K| ≤ c · majorant` at every tabulated point.
    pub fn bounded_by(&self, c: f64) -> bool {
        self.k
            .iter()
            .zip(&self.majorant)
            .all(|(k, m)| k.abs() <= c * m * (1.0 + 1e-12))
    }
}

/// `m` equispaced points of `(-π, π]`.
pub fn angle_grid(m: usize) -> Vec<f64> {
    (1..=m).map(|j| -PI + TAU * j as f64 / m as f64).collect()
}

/// Tabulate `K_{N,s}` on `grid ⊂ (-π, π]` and fit the decay constant.
pub fn kns_table(spec: &KernelSpec, grid: &[f64]) -> Result<KernelTable> {
    if let Some(t) = grid.iter().find(|t| !(**t > -PI && **t <= PI)) {
        return Err(Error::invalid(format!("grid point {t} outside (-π, π]")));
    }
    let values: Vec<(Complex64, f64)> = grid
        .par_iter()
        .map(|&t| (kns_complex(spec, t), spec.majorant(t)))
        .collect();
    let k: Vec<f64> = values.iter().map(|(z, _)| z.re).collect();
    let imag: Vec<f64> = values.iter().map(|(z, _)| z.im).collect();
    let majorant: Vec<f64> = values.iter().map(|(_, m)| *m).collect();
    let ratio: Vec<f64> = k.iter().zip(&majorant).map(|(k, m)| k.abs() / m).collect();
    let fitted_c = ratio.iter().copied().fold(0.0, f64::max);
    Ok(KernelTable {
        n: spec.n,
        s: spec.s,
        t: grid.to_vec(),
        k,
        imag,
        majorant,
        ratio,
        fitted_c,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IJPair {
    pub i: f64,
    pub j: f64,
    pub n: u64,
    pub s: f64,
    /// `Σ_{|n|≤N} |n|^{2s} |a_n|²`, bounded by `I`.
    pub low_band: f64,
}

/// `I = Σ (Δ(n) + Δ(-n)) |a_n|²` and `J = Σ (Δ(n) - Δ(-n)) |a_n|²`.
pub fn ij_sums(coeffs: &FourierCoeffs, spec: &KernelSpec) -> Result<IJPair> {
    let m = coeffs.bandwidth() as u64;
    if 4 * spec.n > m {
        return Err(Error::invalid(format!(
            "bandwidth {m} below 4N = {} needed for the support of Δ",
            4 * spec.n
        )));
    }
    let (mut i, mut j, mut low) = (0.0, 0.0, 0.0);
    for (n, a) in coeffs.iter() {
        let e = a.norm_sqr();
        let (dp, dm) = (delta_ns(spec, n), delta_ns(spec, -n));
        i += (dp + dm) * e;
        j += (dp - dm) * e;
        if n.unsigned_abs() <= spec.n {
            low += (n.unsigned_abs() as f64).powf(2.0 * spec.s) * e;
        }
    }
    Ok(IJPair {
        i,
        j,
        n: spec.n,
        s: spec.s,
        low_band: low,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JnReport {
    pub n: u64,
    pub s: f64,
    /// `2∬ sin(φ(t₁)-φ(t₂)) N^{2s} sin(2Nτ) K(τ)`.
    pub j_integral: f64,
    /// Same with `sin x` replaced by `sin x - x`.
    pub j_cubic: f64,
    /// `Σ (Δ(n) - Δ(-n)) |a_n|²` from the transform of the samples.
    pub j_spectral: f64,
    /// `2∬ cos(φ(t₁)-φ(t₂)) N^{2s} cos(2Nτ) K(τ)`.
    pub i_integral: f64,
    pub i_spectral: f64,
    /// `∬ |φ(t₁)-φ(t₂)|³ (N^{1+2s} ∧ ‖τ‖^{-1-2s})`.
    pub majorant: f64,
    /// `|J| / majorant`, zero when both vanish.
    pub ratio: f64,
    /// `|mean of sin(2Nτ) K(τ)|` on the grid.
    pub zero_mean_residual: f64,
    /// Largest discrepancy among the integral and spectral forms.
    pub agreement: f64,
}

/// Evaluate `J_N` for `f = e^{iφ}` in integral and spectral form and compare
/// with the cubic majorant.
///
/// The discrete double sum equals the spectral sum of the transform exactly
/// when `8N` is below the sample count.
pub fn jn_bound_check(phi: &PhaseLift, spec: &KernelSpec) -> Result<JnReport> {
    if phi.winding() != 0 {
        return Err(Error::NonzeroDegree(phi.winding()));
    }
    let l = phi.len();
    if (8 * spec.n) as usize >= l {
        return Err(Error::invalid(format!(
            "{l} samples cannot resolve Δ at N = {} (need more than 8N)",
            spec.n
        )));
    }
    let p = phi.values();
    let scale = (spec.n as f64).powf(2.0 * spec.s);
    // tables indexed by d with τ_d = 2πd/l = t_j - t_{j-d}
    let (odd, even): (Vec<f64>, Vec<f64>) = (0..l)
        .into_par_iter()
        .map(|d| {
            let tau = TAU * d as f64 / l as f64;
            let k = kns(spec, tau);
            let w = 2.0 * spec.n as f64 * tau;
            (scale * w.sin() * k, scale * w.cos() * k)
        })
        .unzip();
    let rows: Vec<[f64; 3]> = (0..l)
        .into_par_iter()
        .map(|d| {
            let mut sin_row = Vec::with_capacity(l);
            let mut cub_row = Vec::with_capacity(l);
            let mut cos_row = Vec::with_capacity(l);
            for j in 0..l {
                let dphi = p[j] - p[(j + l - d) % l];
                sin_row.push(dphi.sin());
                cub_row.push(dphi.sin() - dphi);
                cos_row.push(dphi.cos());
            }
            [
                odd[d] * pairwise_sum(&sin_row),
                odd[d] * pairwise_sum(&cub_row),
                even[d] * pairwise_sum(&cos_row),
            ]
        })
        .collect();
    let norm = 2.0 / (l as f64 * l as f64);
    let col = |i: usize| pairwise_sum(&rows.iter().map(|r| r[i]).collect::<Vec<_>>()) * norm;
    let (j_integral, j_cubic, i_integral) = (col(0), col(1), col(2));

    let samples = CircleSamples::new(p.iter().map(|&x| Complex64::from_polar(1.0, x)).collect())?;
    let ij = ij_sums(&analyze_full(&samples), spec)?;

    let majorant = shift_double_integral(l, capped_kernel(spec.s, spec.n as f64), |i, j| {
        (p[i] - p[j]).abs().powi(3)
    });
    let odd_over_scale: Vec<f64> = odd.iter().map(|x| x / scale).collect();
    let zero_mean_residual = (pairwise_sum(&odd_over_scale) / l as f64).abs();
    let agreement = [
        (j_integral - ij.j).abs(),
        (j_integral - j_cubic).abs(),
        (i_integral - ij.i).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(JnReport {
        n: spec.n,
        s: spec.s,
        j_integral,
        j_cubic,
        j_spectral: ij.j,
        i_integral,
        i_spectral: ij.i,
        majorant,
        ratio: if majorant > 0.0 {
            j_integral.abs() / majorant
        } else {
            0.0
        },
        zero_mean_residual,
        agreement,
    })
}
