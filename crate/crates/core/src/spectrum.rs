//! Sampling on the circle and the coefficient-side operations built on it.
//!
//! Samples live on the uniform grid `t_j = 2πj/N` with `N` a power of two.
//! Coefficients are normalized so that `a_n = (1/N) Σ_j f(t_j) e^{-i n t_j}`,
//! which matches the mean-value convention `∫ = (1/2π) ∫_{-π}^{π}`.

use std::cell::RefCell;
use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_GRID: usize = 4096;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Normalized forward DFT: `out[b] = (1/N) Σ_j x_j e^{-2πi b j / N}`.
pub(crate) fn forward(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let mut buf = values.to_vec();
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n).process(&mut buf));
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|v| *v *= scale);
    buf
}

/// Unnormalized inverse DFT: `out[j] = Σ_b X_b e^{2πi b j / N}`.
pub(crate) fn inverse(spectrum: &[Complex64]) -> Vec<Complex64> {
    let n = spectrum.len();
    let mut buf = spectrum.to_vec();
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(n).process(&mut buf));
    buf
}

/// Signed frequency carried by DFT bin `b` of an `n`-point transform.
/// The Nyquist bin is reported as `+n/2`.
#[inline]
pub(crate) fn bin_frequency(b: usize, n: usize) -> i64 {
    if b <= n / 2 {
        b as i64
    } else {
        b as i64 - n as i64
    }
}

/// Multiply the spectrum of `samples` by `multiplier(n)` and return to the
/// sample domain.
pub(crate) fn apply_multiplier<F>(samples: &[Complex64], multiplier: F) -> Vec<Complex64>
where
    F: Fn(i64) -> Complex64,
{
    let n = samples.len();
    let mut spec = forward(samples);
    for (b, v) in spec.iter_mut().enumerate() {
        *v *= multiplier(bin_frequency(b, n));
    }
    inverse(&spec)
}

/// Fixed-order pairwise summation; the result depends only on the input order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Fold an angle into `(-π, π]`; its absolute value is `dist(t, 2πZ)`.
#[inline]
pub fn fold_angle(t: f64) -> f64 {
    let mut r = t.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    r
}

/// Uniform boundary samples `values[j] = F(e^{i 2πj/N})`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleSamples {
    values: Vec<Complex64>,
}

impl CircleSamples {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        let n = values.len();
        if n < 4 || !n.is_power_of_two() {
            return Err(Error::BadSampleCount(n));
        }
        if let Some(i) = values
            .iter()
            .position(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { values })
    }

    /// Sample `f(t)` at `t_j = 2πj/n`.
    pub fn from_fn<F: Fn(f64) -> Complex64>(n: usize, f: F) -> Result<Self> {
        Self::new((0..n).map(|j| f(angle(j, n))).collect())
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn angle(&self, j: usize) -> f64 {
        angle(j, self.len())
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `(mean |f|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v.norm_sqr()).collect();
        (pairwise_sum(&sq) / self.len() as f64).sqrt()
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self {
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise product; both operands must share the grid.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    fn zip_with<F: Fn(Complex64, Complex64) -> Complex64>(
        &self,
        other: &Self,
        f: F,
    ) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::invalid(format!(
                "grid mismatch: {} vs {} samples",
                self.len(),
                other.len()
            )));
        }
        Ok(Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }
}

#[inline]
pub(crate) fn angle(j: usize, n: usize) -> f64 {
    TAU * j as f64 / n as f64
}

/// Samples of a circle map known to satisfy `|f| = 1` up to `tol`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnimodularSamples {
    base: CircleSamples,
    tol: f64,
}

impl UnimodularSamples {
    pub fn new(base: CircleSamples, tol: f64) -> Result<Self> {
        let deviation = max_modulus_deviation(&base);
        if !(deviation <= tol) {
            return Err(Error::NotUnimodular { deviation, tol });
        }
        Ok(Self { base, tol })
    }

    /// Build `e^{iφ}` from real phase samples; unimodular by construction.
    pub fn from_phase(phase: &[f64]) -> Result<Self> {
        let base = CircleSamples::new(
            phase
                .iter()
                .map(|&p| Complex64::from_polar(1.0, p))
                .collect(),
        )?;
        Self::new(base, 1e-12)
    }

    pub fn samples(&self) -> &CircleSamples {
        &self.base
    }

    pub fn into_samples(self) -> CircleSamples {
        self.base
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn len(&self) -> usize {
        self.base.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        self.base.values()
    }
}

pub fn max_modulus_deviation(samples: &CircleSamples) -> f64 {
    samples
        .values()
        .iter()
        .map(|v| (v.norm() - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Complex coefficients indexed on `[-M, M]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierCoeffs {
    bandwidth: usize,
    values: Vec<Complex64>,
}

impl FourierCoeffs {
    pub fn zeros(bandwidth: usize) -> Self {
        Self {
            bandwidth,
            values: vec![Complex64::new(0.0, 0.0); 2 * bandwidth + 1],
        }
    }

    pub fn from_fn<F: FnMut(i64) -> Complex64>(bandwidth: usize, f: F) -> Self {
        let m = bandwidth as i64;
        Self {
            bandwidth,
            values: (-m..=m).map(f).collect(),
        }
    }

    /// Delta at index `n`.
    pub fn mode(n: i64) -> Self {
        let mut c = Self::zeros(n.unsigned_abs() as usize);
        c.set(n, Complex64::new(1.0, 0.0));
        c
    }

    /// Collect sparse `(n, value)` pairs; absent indices are zero and the
    /// bandwidth is the largest `|n|`. Repeated indices accumulate.
    pub fn from_pairs<I: IntoIterator<Item = (i64, Complex64)>>(pairs: I) -> Self {
        let pairs: Vec<_> = pairs.into_iter().collect();
        let m = pairs
            .iter()
            .map(|(n, _)| n.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        let mut c = Self::zeros(m);
        for (n, v) in pairs {
            let slot = c.slot(n).expect("index within computed bandwidth");
            c.values[slot] += v;
        }
        c
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    fn slot(&self, n: i64) -> Option<usize> {
        let m = self.bandwidth as i64;
        (-m..=m).contains(&n).then(|| (n + m) as usize)
    }

    /// Coefficient at `n`; zero outside `[-M, M]`.
    pub fn get(&self, n: i64) -> Complex64 {
        self.slot(n)
            .map_or(Complex64::new(0.0, 0.0), |i| self.values[i])
    }

    /// Panics if `n` lies outside the bandwidth.
    pub fn set(&mut self, n: i64, v: Complex64) {
        let i = self
            .slot(n)
            .unwrap_or_else(|| panic!("index {n} outside bandwidth {}", self.bandwidth));
        self.values[i] = v;
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let m = self.bandwidth as i64;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (i as i64 - m, v))
    }

    /// `Σ |a_n|²`.
    pub fn energy(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v.norm_sqr()).collect();
        pairwise_sum(&sq)
    }

    /// Same coefficients on a different bandwidth; entries beyond it are dropped.
    pub fn with_bandwidth(&self, bandwidth: usize) -> Self {
        Self::from_fn(bandwidth, |n| self.get(n))
    }

    /// Coefficients of the complex conjugate map: `n ↦ conj(a_{-n})`.
    pub fn conjugate_map(&self) -> Self {
        Self::from_fn(self.bandwidth, |n| self.get(-n).conj())
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            bandwidth: self.bandwidth,
            values: self.values.iter().map(|&v| v * k).collect(),
        }
    }

    /// Coefficientwise difference on the larger of the two bandwidths.
    pub fn sub(&self, other: &Self) -> Self {
        let m = self.bandwidth.max(other.bandwidth);
        Self::from_fn(m, |n| self.get(n) - other.get(n))
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.bandwidth.max(other.bandwidth);
        Self::from_fn(m, |n| self.get(n) + other.get(n))
    }

    /// Hermitian inner product `Σ a_n conj(b_n)`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let m = self.bandwidth.min(other.bandwidth) as i64;
        (-m..=m).map(|n| self.get(n) * other.get(n).conj()).sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let m = self.bandwidth.max(other.bandwidth) as i64;
        (-m..=m)
            .map(|n| (self.get(n) - other.get(n)).norm())
            .fold(0.0, f64::max)
    }

    /// `Σ_{n<0} |a_n|²`.
    pub fn negative_energy(&self) -> f64 {
        self.iter()
            .filter(|(n, _)| *n < 0)
            .map(|(_, v)| v.norm_sqr())
            .sum()
    }

    /// `Σ_{n>0} |a_n|²`.
    pub fn positive_energy(&self) -> f64 {
        self.iter()
            .filter(|(n, _)| *n > 0)
            .map(|(_, v)| v.norm_sqr())
            .sum()
    }
}

/// Extract `a_n` for `|n| ≤ bandwidth`.
pub fn analyze(samples: &CircleSamples, bandwidth: usize) -> Result<FourierCoeffs> {
    let n = samples.len();
    if 2 * bandwidth + 1 > n {
        return Err(Error::Aliasing {
            bandwidth,
            samples: n,
        });
    }
    let spec = forward(samples.values());
    Ok(FourierCoeffs::from_fn(bandwidth, |k| {
        spec[k.rem_euclid(n as i64) as usize]
    }))
}

/// Analyze at the largest alias-free bandwidth `N/2 - 1`.
pub fn analyze_full(samples: &CircleSamples) -> FourierCoeffs {
    analyze(samples, samples.len() / 2 - 1).expect("N/2 - 1 never aliases")
}

/// Evaluate the trigonometric polynomial on `n` uniform samples.
pub fn synthesize(coeffs: &FourierCoeffs, n: usize) -> Result<CircleSamples> {
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::BadSampleCount(n));
    }
    if n < 2 * coeffs.bandwidth() + 2 {
        return Err(Error::TooFewSamples {
            bandwidth: coeffs.bandwidth(),
            samples: n,
        });
    }
    let mut spec = vec![Complex64::new(0.0, 0.0); n];
    for (k, v) in coeffs.iter() {
        spec[k.rem_euclid(n as i64) as usize] = v;
    }
    CircleSamples::new(inverse(&spec))
}

/// Upper end of a projection range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Upper {
    At(i64),
    Infinity,
}

/// Restrict coefficients to `[lo, hi]`.
pub fn project(coeffs: &FourierCoeffs, lo: i64, hi: Upper) -> Result<FourierCoeffs> {
    if let Upper::At(h) = hi {
        if lo > h {
            return Err(Error::invalid(format!(
                "empty range [{lo}, {h}] with lo > hi"
            )));
        }
    }
    let keep = |n: i64| {
        n >= lo
            && match hi {
                Upper::Infinity => true,
                Upper::At(h) => n <= h,
            }
    };
    Ok(FourierCoeffs::from_fn(coeffs.bandwidth(), |n| {
        if keep(n) {
            coeffs.get(n)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// The dyadic Littlewood–Paley block `[⌈2^{k-1}⌉, 2^k]` as an integer range.
pub fn dyadic_block(k: u32) -> (i64, i64) {
    let hi = 1i64 << k;
    let lo = if k == 0 { 1 } else { 1i64 << (k - 1) };
    (lo, hi)
}

/// Conjugate function multiplier `-i·sgn(n)`.
pub fn hilbert(coeffs: &FourierCoeffs) -> FourierCoeffs {
    FourierCoeffs::from_fn(coeffs.bandwidth(), |n| {
        hilbert_multiplier(n) * coeffs.get(n)
    })
}

#[inline]
fn hilbert_multiplier(n: i64) -> Complex64 {
    Complex64::new(0.0, -(n.signum() as f64))
}

/// Conjugate function of real samples. The Nyquist bin is annihilated so the
/// output stays real.
pub fn hilbert_real(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let input: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    apply_multiplier(&input, |k| {
        if k.unsigned_abs() as usize * 2 == n {
            Complex64::new(0.0, 0.0)
        } else {
            hilbert_multiplier(k)
        }
    })
    .into_iter()
    .map(|v| v.re)
    .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SmootherFamily {
    Fejer,
    #[default]
    DeLaValleePoussin,
}

impl fmt::Display for SmootherFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmootherFamily::Fejer => f.write_str("fejer"),
            SmootherFamily::DeLaValleePoussin => f.write_str("de-la-vallee-poussin"),
        }
    }
}

/// A summability kernel of order `⌈1/ε⌉`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmootherSpec {
    pub family: SmootherFamily,
    pub epsilon: f64,
}

impl SmootherSpec {
    pub fn new(family: SmootherFamily, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::invalid(format!("epsilon {epsilon} outside (0, 1]")));
        }
        Ok(Self { family, epsilon })
    }

    pub fn cutoff(&self) -> usize {
        // guard against 1/ε landing a hair above an integer
        ((1.0 / self.epsilon) - 1e-9).ceil().max(1.0) as usize
    }

    /// Kernel coefficient at `n`, always in `[0, 1]` with value 1 at `n = 0`.
    pub fn coefficient(&self, n: i64) -> f64 {
        let l = self.cutoff() as f64;
        let a = n.unsigned_abs() as f64;
        match self.family {
            SmootherFamily::Fejer => (1.0 - a / (l + 1.0)).max(0.0),
            SmootherFamily::DeLaValleePoussin => {
                if a <= l {
                    1.0
                } else {
                    ((2.0 * l - a) / l).max(0.0)
                }
            }
        }
    }

    /// Largest `|n|` with a nonzero coefficient.
    pub fn support(&self) -> usize {
        let l = self.cutoff();
        match self.family {
            SmootherFamily::Fejer => l,
            SmootherFamily::DeLaValleePoussin => 2 * l - 1,
        }
    }
}

/// `h = f ∗ K`, computed as a coefficientwise product.
pub fn smooth(f: &CircleSamples, spec: &SmootherSpec) -> CircleSamples {
    let out = apply_multiplier(f.values(), |n| Complex64::new(spec.coefficient(n), 0.0));
    CircleSamples::new(out).expect("filtering preserves the grid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mode_samples(k: i64, n: usize) -> CircleSamples {
        CircleSamples::from_fn(n, |t| Complex64::from_polar(1.0, k as f64 * t)).unwrap()
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(matches!(
            CircleSamples::new(vec![c(1.0, 0.0); 6]),
            Err(Error::BadSampleCount(6))
        ));
        assert!(matches!(
            CircleSamples::new(vec![c(1.0, 0.0); 2]),
            Err(Error::BadSampleCount(2))
        ));
        let mut v = vec![c(1.0, 0.0); 8];
        v[3] = c(f64::NAN, 0.0);
        assert!(matches!(CircleSamples::new(v), Err(Error::NonFinite(3))));
    }

    #[test]
    fn pure_mode_analysis() {
        let coeffs = analyze(&mode_samples(3, 64), 8).unwrap();
        for (n, v) in coeffs.iter() {
            let expected = if n == 3 { 1.0 } else { 0.0 };
            assert!((v - c(expected, 0.0)).norm() < 1e-12, "n={n}: {v}");
        }
    }

    #[test]
    fn constant_analysis() {
        let s = CircleSamples::from_fn(16, |_| c(1.0, 0.0)).unwrap();
        let coeffs = analyze(&s, 7).unwrap();
        assert!((coeffs.get(0) - 1.0).norm() < 1e-15);
        assert!(coeffs
            .iter()
            .filter(|(n, _)| *n != 0)
            .all(|(_, v)| v.norm() < 1e-15));
    }

    #[test]
    fn bandwidth_beyond_nyquist_is_rejected() {
        let s = mode_samples(1, 16);
        assert!(matches!(analyze(&s, 8), Err(Error::Aliasing { .. })));
        assert!(analyze(&s, 7).is_ok());
    }

    #[test]
    fn moebius_factor_against_oversampled_quadrature() {
        // (0.5 - z)/(1 - 0.5 z) = 0.5 - 0.75 Σ_{j≥0} 0.5^j z^{j+1}
        let a = 0.5;
        let f = |t: f64| {
            let z = Complex64::from_polar(1.0, t);
            (a - z) / (1.0 - a * z)
        };
        let coeffs = analyze(&CircleSamples::from_fn(64, f).unwrap(), 16).unwrap();
        // independent route: term-by-term rectangle rule at 10x oversampling
        let fine = 640;
        for n in -16i64..=16 {
            let q: Complex64 = (0..fine)
                .map(|j| {
                    let t = TAU * j as f64 / fine as f64;
                    f(t) * Complex64::from_polar(1.0, -(n as f64) * t)
                })
                .sum::<Complex64>()
                / fine as f64;
            assert!((coeffs.get(n) - q).norm() < 1e-10, "n={n}");
        }
        assert_abs_diff_eq!(coeffs.get(0).re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(coeffs.get(1).re, -0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(coeffs.get(2).re, -0.375, epsilon = 1e-12);
    }

    #[test]
    fn synthesize_delta_and_small_grid() {
        let s = synthesize(&FourierCoeffs::mode(1), 8).unwrap();
        for (j, v) in s.values().iter().enumerate() {
            assert!((v - Complex64::from_polar(1.0, s.angle(j))).norm() < 1e-14);
        }
        let wide = FourierCoeffs::zeros(4);
        assert!(matches!(
            synthesize(&wide, 8),
            Err(Error::TooFewSamples { .. })
        ));
        assert!(synthesize(&wide, 16).is_ok());
    }

    #[test]
    fn projection_basics() {
        let up = FourierCoeffs::mode(3);
        assert_eq!(project(&up, 0, Upper::Infinity).unwrap(), up);
        let down = FourierCoeffs::mode(-3);
        assert_eq!(project(&down, 0, Upper::Infinity).unwrap().energy(), 0.0);
        assert!(project(&up, 4, Upper::At(2)).is_err());
        // disjoint range silently yields zero
        assert_eq!(project(&up, 10, Upper::At(12)).unwrap().energy(), 0.0);
    }

    #[test]
    fn dyadic_tiles_reconstruct() {
        let coeffs =
            FourierCoeffs::from_fn(40, |n| c((n as f64 * 0.37).sin(), (n as f64 * 0.11).cos()));
        // blocks [2^{k-1}, 2^k] overlap at their endpoints; tile with half-open pieces
        let mut total = project(&coeffs, -40, Upper::At(0)).unwrap();
        for k in 0..7u32 {
            let (lo, hi) = dyadic_block(k);
            let lo = if k == 0 { lo } else { lo + 1 };
            total = total.add(&project(&coeffs, lo, Upper::At(hi)).unwrap());
        }
        assert!(total.max_abs_diff(&coeffs) < 1e-15);
    }

    #[test]
    fn hilbert_examples() {
        // cos t = (z + z̄)/2 ↦ sin t
        let cos = FourierCoeffs::from_pairs([(1, c(0.5, 0.0)), (-1, c(0.5, 0.0))]);
        let h = hilbert(&cos);
        assert!((h.get(1) - c(0.0, -0.5)).norm() < 1e-15);
        assert!((h.get(-1) - c(0.0, 0.5)).norm() < 1e-15);
        let sin = synthesize(&h, 16).unwrap();
        for (j, v) in sin.values().iter().enumerate() {
            assert!((v.re - sin.angle(j).sin()).abs() < 1e-14 && v.im.abs() < 1e-14);
        }
        assert_eq!(hilbert(&FourierCoeffs::mode(0)).energy(), 0.0);
    }

    #[test]
    fn hilbert_real_matches_coefficient_route() {
        let n = 64;
        let u: Vec<f64> = (0..n)
            .map(|j| (angle(j, n)).cos() + 0.3 * (3.0 * angle(j, n)).sin())
            .collect();
        let hu = hilbert_real(&u);
        for (j, v) in hu.iter().enumerate() {
            let t = angle(j, n);
            assert!((v - (t.sin() - 0.3 * (3.0 * t).cos())).abs() < 1e-13);
        }
    }

    #[test]
    fn smoothing_examples() {
        let one = CircleSamples::from_fn(64, |_| c(1.0, 0.0)).unwrap();
        for fam in [SmootherFamily::Fejer, SmootherFamily::DeLaValleePoussin] {
            let s = SmootherSpec::new(fam, 0.37).unwrap();
            let h = smooth(&one, &s);
            assert!(h.sub(&one).unwrap().sup_norm() < 1e-14);
        }
        let z = mode_samples(1, 64);
        let vp = SmootherSpec::new(SmootherFamily::DeLaValleePoussin, 0.5).unwrap();
        assert_eq!(vp.cutoff(), 2);
        assert!(smooth(&z, &vp).sub(&z).unwrap().sup_norm() < 1e-14);
        assert!(SmootherSpec::new(SmootherFamily::Fejer, 0.0).is_err());
        assert!(SmootherSpec::new(SmootherFamily::Fejer, 1.5).is_err());
    }

    #[test]
    fn kernel_coefficients_in_unit_interval() {
        for fam in [SmootherFamily::Fejer, SmootherFamily::DeLaValleePoussin] {
            for eps in [1.0, 0.5, 1.0 / 8.0, 1.0 / 64.0, 0.013] {
                let s = SmootherSpec::new(fam, eps).unwrap();
                assert_eq!(s.coefficient(0), 1.0);
                for n in -300..=300 {
                    let k = s.coefficient(n);
                    assert!((0.0..=1.0).contains(&k));
                    assert_eq!(k, s.coefficient(-n));
                    if n.unsigned_abs() as usize > s.support() {
                        assert_eq!(k, 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn smoothing_square_phase_converges_monotonically() {
        // continuous phase t²/π on (-π, π] with a kink at t = π
        let f = CircleSamples::from_fn(DEFAULT_GRID, |t| {
            let u = fold_angle(t);
            Complex64::from_polar(1.0, u * u / PI)
        })
        .unwrap();
        let errs: Vec<f64> = [8.0, 16.0, 32.0]
            .iter()
            .map(|&inv| {
                let s = SmootherSpec::new(SmootherFamily::DeLaValleePoussin, 1.0 / inv).unwrap();
                smooth(&f, &s).sub(&f).unwrap().sup_norm()
            })
            .collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    }

    fn coeff_strategy(m: usize) -> impl Strategy<Value = FourierCoeffs> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2 * m + 1).prop_map(move |v| {
            let mut c = FourierCoeffs::zeros(m);
            for (i, (re, im)) in v.into_iter().enumerate() {
                c.set(i as i64 - m as i64, Complex64::new(re, im));
            }
            c
        })
    }

    proptest! {
        #[test]
        fn round_trip_and_parseval(coeffs in coeff_strategy(32)) {
            let s = synthesize(&coeffs, 128).unwrap();
            let back = analyze(&s, 32).unwrap();
            prop_assert!(back.max_abs_diff(&coeffs) < 1e-12);
            let energy = s.l2_norm().powi(2);
            prop_assert!((energy - coeffs.energy()).abs() < 1e-10);
        }

        #[test]
        fn projection_is_idempotent_and_orthogonal(coeffs in coeff_strategy(20), lo in -20i64..20, w in 0i64..10) {
            let a = project(&coeffs, lo, Upper::At(lo + w)).unwrap();
            prop_assert_eq!(project(&a, lo, Upper::At(lo + w)).unwrap(), a.clone());
            let b = project(&coeffs, lo + w + 1, Upper::Infinity).unwrap();
            prop_assert!(a.inner(&b).norm() < 1e-12);
        }

        #[test]
        fn hilbert_involution_and_energy(coeffs in coeff_strategy(16)) {
            let hh = hilbert(&hilbert(&coeffs));
            let mut centered = coeffs.clone();
            centered.set(0, Complex64::new(0.0, 0.0));
            prop_assert!(hh.add(&centered).max_abs_diff(&FourierCoeffs::zeros(16)) < 1e-15);
            let e = coeffs.energy() - coeffs.get(0).norm_sqr();
            prop_assert!((hilbert(&coeffs).energy() - e).abs() < 1e-12);
        }

        #[test]
        fn fejer_never_increases_sup_norm(coeffs in coeff_strategy(12), inv in 1u32..20) {
            let f = synthesize(&coeffs, 64).unwrap();
            let s = SmootherSpec::new(SmootherFamily::Fejer, 1.0 / inv as f64).unwrap();
            prop_assert!(smooth(&f, &s).sup_norm() <= f.sup_norm() * (1.0 + 1e-12));
        }
    }
}
