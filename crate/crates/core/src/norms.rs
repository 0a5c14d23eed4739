//! Sobolev seminorms in spectral and integral form, mean-oscillation
//! estimators, weighted Taylor norms, and the small-phase projection bound.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::shift_double_integral;
use crate::spectrum::{analyze_full, fold_angle, CircleSamples, FourierCoeffs, UnimodularSamples};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// `n ≥ 0` only.
    OneSided,
    TwoSided,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SobolevParams {
    pub s: f64,
    pub side: Side,
    /// Replace `|n|` by `|n| ∧ n_cut` in the weight.
    pub n_cut: Option<u64>,
}

impl SobolevParams {
    pub fn new(s: f64, side: Side) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::invalid(format!(
                "smoothness {s} must be finite and positive"
            )));
        }
        Ok(Self {
            s,
            side,
            n_cut: None,
        })
    }

    pub fn one_sided(s: f64) -> Result<Self> {
        Self::new(s, Side::OneSided)
    }

    pub fn two_sided(s: f64) -> Result<Self> {
        Self::new(s, Side::TwoSided)
    }

    pub fn truncated(mut self, n_cut: u64) -> Self {
        self.n_cut = Some(n_cut);
        self
    }

    fn weight(&self, n: i64) -> f64 {
        if n == 0 || (self.side == Side::OneSided && n < 0) {
            return 0.0;
        }
        let mut a = n.unsigned_abs();
        if let Some(c) = self.n_cut {
            a = a.min(c);
        }
        (a as f64).powf(2.0 * self.s)
    }
}

/// `Σ w(n) |a_n|²` with `w(n) = |n|^{2s}` (or `(|n| ∧ N)^{2s}`), zero at `n = 0`.
pub fn sobolev_spectral(coeffs: &FourierCoeffs, p: &SobolevParams) -> f64 {
    coeffs.iter().map(|(n, a)| p.weight(n) * a.norm_sqr()).sum()
}

/// `(|t| ∧ …)`-capped fractional kernel `N^{1+2s} ∧ ‖t‖^{-1-2s}`.
pub fn capped_kernel(s: f64, scale: f64) -> impl Fn(f64) -> f64 + Sync + Copy {
    let cap = scale.powf(1.0 + 2.0 * s);
    move |tau: f64| cap.min(tau.powf(-1.0 - 2.0 * s))
}

/// Rectangle-rule evaluation of
/// `∬ |f(t₁) - f(t₂)|² (N^{1+2s} ∧ ‖t₁-t₂‖^{-1-2s}) dt₁ dt₂`
/// with the mean-value measure on each factor. Only meaningful for `0 < s < 1`.
pub fn sobolev_integral(f: &CircleSamples, s: f64, scale: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::invalid(format!(
            "integral form needs 0 < s < 1, got {s}; the equivalence with the spectral sum fails outside"
        )));
    }
    if !(scale > 0.0) {
        return Err(Error::invalid(format!(
            "frequency scale {scale} must be positive"
        )));
    }
    let v = f.values();
    Ok(shift_double_integral(
        v.len(),
        capped_kernel(s, scale),
        |i, j| (v[i] - v[j]).norm_sqr(),
    ))
}

/// Window centers and half-widths over which the mean oscillation is maximized.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BmoGrid {
    pub centers: Vec<f64>,
    pub widths: Vec<f64>,
}

impl BmoGrid {
    /// `n_centers` equispaced centers and half-widths `π 2^{-m}`, `m < n_widths`.
    pub fn dyadic(n_centers: usize, n_widths: usize) -> Self {
        Self {
            centers: (0..n_centers)
                .map(|i| TAU * i as f64 / n_centers as f64)
                .collect(),
            widths: (0..n_widths).map(|m| PI * 0.5f64.powi(m as i32)).collect(),
        }
    }
}

impl Default for BmoGrid {
    fn default() -> Self {
        Self::dyadic(64, 16)
    }
}

/// Mean and mean oscillation of the samples in the arc `|t - center| ≤ half_width`.
/// `None` when the arc holds no sample.
pub fn window_stats(
    values: &[num_complex::Complex64],
    center: f64,
    half_width: f64,
) -> Option<(num_complex::Complex64, f64)> {
    let n = values.len();
    let h = TAU / n as f64;
    let lo = ((center - half_width) / h - 1e-9).ceil() as i64;
    let hi = ((center + half_width) / h + 1e-9).floor() as i64;
    if hi < lo {
        return None;
    }
    let count = ((hi - lo + 1) as usize).min(n);
    let idx = |k: usize| (lo + k as i64).rem_euclid(n as i64) as usize;
    let mean = (0..count)
        .map(|k| values[idx(k)])
        .sum::<num_complex::Complex64>()
        / count as f64;
    let osc = (0..count)
        .map(|k| (values[idx(k)] - mean).norm())
        .sum::<f64>()
        / count as f64;
    Some((mean, osc))
}

fn validate_width(w: f64) -> Result<()> {
    if !(w > 0.0 && w <= PI) {
        return Err(Error::invalid(format!(
            "window half-width {w} outside (0, π]"
        )));
    }
    Ok(())
}

/// Grid lower bound of the BMO norm: the largest mean oscillation over the
/// windows of `grid`.
pub fn bmo_norm(f: &CircleSamples, grid: &BmoGrid) -> Result<f64> {
    let mut best: f64 = 0.0;
    for &w in &grid.widths {
        validate_width(w)?;
        for &c in &grid.centers {
            if let Some((_, osc)) = window_stats(f.values(), c, w) {
                best = best.max(osc);
            }
        }
    }
    Ok(best)
}

/// `bmo_norm` of real samples.
pub fn bmo_norm_real(values: &[f64], grid: &BmoGrid) -> Result<f64> {
    bmo_norm(&CircleSamples::from_real(values)?, grid)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscillationProfile {
    pub scales: Vec<f64>,
    /// Largest mean oscillation at each scale.
    pub osc: Vec<f64>,
    /// Largest `1 - |window mean|` at each scale.
    pub modulus_gap: Vec<f64>,
    /// Smallest `osc - (1 - |mean|)` over every window evaluated; nonnegative
    /// for unimodular input up to its tolerance.
    pub min_slack: f64,
}

impl OscillationProfile {
    /// Oscillation at the finest scale.
    pub fn tail(&self) -> f64 {
        self.osc.last().copied().unwrap_or(0.0)
    }
}

/// Mean oscillation per scale over `n_centers` equispaced windows.
pub fn vmo_profile(
    f: &CircleSamples,
    scales: &[f64],
    n_centers: usize,
) -> Result<OscillationProfile> {
    if scales.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("scales must be strictly decreasing"));
    }
    let mut osc = Vec::with_capacity(scales.len());
    let mut gap = Vec::with_capacity(scales.len());
    let mut min_slack = f64::INFINITY;
    for &w in scales {
        validate_width(w)?;
        let (mut o_max, mut g_max) = (0.0f64, f64::NEG_INFINITY);
        for i in 0..n_centers {
            let c = TAU * i as f64 / n_centers as f64;
            if let Some((mean, o)) = window_stats(f.values(), c, w) {
                let g = 1.0 - mean.norm();
                o_max = o_max.max(o);
                g_max = g_max.max(g);
                min_slack = min_slack.min(o - g);
            }
        }
        osc.push(o_max);
        gap.push(if g_max.is_finite() { g_max } else { 0.0 });
    }
    Ok(OscillationProfile {
        scales: scales.to_vec(),
        osc,
        modulus_gap: gap,
        min_slack: if min_slack.is_finite() {
            min_slack
        } else {
            0.0
        },
    })
}

/// Half-widths `π 2^{-m}` for `m = 1..=levels`.
pub fn dyadic_scales(levels: u32) -> Vec<f64> {
    (1..=levels).map(|m| PI * 0.5f64.powi(m as i32)).collect()
}

/// A weight sequence `ω_n`, `n ≥ 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeightSeq {
    /// `ω_n = 1`.
    Unit,
    /// `ω_n = log(n + 2)`.
    Log,
    Table(Vec<f64>),
}

impl WeightSeq {
    pub fn table(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::invalid(format!(
                "weight {i} must be finite and nonnegative"
            )));
        }
        Ok(Self::Table(values))
    }

    pub fn at(&self, n: u64) -> Option<f64> {
        match self {
            Self::Unit => Some(1.0),
            Self::Log => Some((n as f64 + 2.0).ln()),
            Self::Table(v) => v.get(n as usize).copied(),
        }
    }

    /// `ω` at `n = m·2^e`, computed in the log domain so that indices far
    /// beyond `u64` are representable. `None` for tables.
    pub fn at_scaled(&self, m: u64, e: u32) -> Option<f64> {
        match self {
            Self::Unit => Some(1.0),
            Self::Log => {
                let ln_n = (m as f64).ln() + e as f64 * std::f64::consts::LN_2;
                // ln(n + 2) = ln n + ln(1 + 2/n)
                Some(ln_n + (2.0 * (-ln_n).exp()).ln_1p())
            }
            Self::Table(v) => (e < 63)
                .then(|| m.checked_mul(1u64 << e))
                .flatten()
                .and_then(|n| v.get(n as usize).copied()),
        }
    }

    pub fn is_nondecreasing(&self) -> bool {
        match self {
            Self::Unit | Self::Log => true,
            Self::Table(v) => v.windows(2).all(|w| w[1] >= w[0]),
        }
    }

    /// Prefix test for `ω_n → ∞`: the last available value exceeds the first.
    pub fn grows(&self) -> bool {
        match self {
            Self::Unit => false,
            Self::Log => true,
            Self::Table(v) => v.len() >= 2 && v[v.len() - 1] > v[0],
        }
    }

    /// `sup ω` when the weight is bounded.
    pub fn supremum(&self) -> Option<f64> {
        match self {
            Self::Unit => Some(1.0),
            Self::Log => None,
            Self::Table(v) => v.iter().copied().reduce(f64::max),
        }
    }
}

/// `(Σ_{n≥0} ω_n |a_n|²)^{1/2}` over the analytic part.
pub fn weighted_norm(coeffs: &FourierCoeffs, w: &WeightSeq) -> Result<f64> {
    let mut total = 0.0;
    for (n, a) in coeffs.iter().filter(|(n, _)| *n >= 0) {
        let e = a.norm_sqr();
        if e == 0.0 {
            continue;
        }
        let omega = w
            .at(n as u64)
            .ok_or_else(|| Error::invalid(format!("weight table too short for index {n}")))?;
        total += omega * e;
    }
    Ok(total.sqrt())
}

/// Ceiling on `‖φ‖_{H^{s'}}` for the projection bound.
pub const PROJECTION_DELTA: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionBoundReport {
    pub s: f64,
    pub phi_norm: f64,
    pub delta: f64,
    /// `‖e^{iφ}‖`, two-sided seminorm.
    pub f_norm: f64,
    /// `‖P e^{iφ}‖`, analytic part.
    pub pf_norm: f64,
    pub ratio: f64,
    /// `‖e^{iφ} - 1 - iφ‖`.
    pub h_norm: f64,
    pub h_ratio: f64,
    /// `‖Pφ‖² / ‖φ‖²`, one half for real `φ`.
    pub analytic_share: f64,
    pub bound_holds: bool,
    pub h_bound_holds: bool,
}

fn seminorm(c: &FourierCoeffs, p: &SobolevParams) -> f64 {
    sobolev_spectral(c, p).sqrt()
}

/// For small real `φ` compare `‖e^{iφ}‖` with three times the norm of its
/// analytic projection, and check `‖e^{iφ} - 1 - iφ‖ ≤ δ‖φ‖`.
pub fn projection_bound_check(phi: &[f64], s: f64) -> Result<ProjectionBoundReport> {
    let two = SobolevParams::two_sided(s)?;
    let one = SobolevParams::one_sided(s)?;
    let phi_c = analyze_full(&CircleSamples::from_real(phi)?);
    let phi_norm = seminorm(&phi_c, &two);
    if !(phi_norm < PROJECTION_DELTA) {
        return Err(Error::precondition(format!(
            "‖φ‖_H^{s} = {phi_norm:.4} must stay below {PROJECTION_DELTA}"
        )));
    }
    let f = UnimodularSamples::from_phase(phi)?;
    let f_c = analyze_full(f.samples());
    let f_norm = seminorm(&f_c, &two);
    let pf_norm = seminorm(&f_c, &one);
    let h = CircleSamples::new(
        f.values()
            .iter()
            .zip(phi)
            .map(|(&z, &p)| z - num_complex::Complex64::new(1.0, p))
            .collect(),
    )?;
    let h_norm = seminorm(&analyze_full(&h), &two);
    let ratio = if pf_norm > 0.0 { f_norm / pf_norm } else { 0.0 };
    let h_ratio = if phi_norm > 0.0 {
        h_norm / phi_norm
    } else {
        0.0
    };
    let analytic_share = if phi_norm > 0.0 {
        seminorm(&phi_c, &one).powi(2) / phi_norm.powi(2)
    } else {
        0.5
    };
    let slack = 1e-15;
    Ok(ProjectionBoundReport {
        s,
        phi_norm,
        delta: PROJECTION_DELTA,
        f_norm,
        pf_norm,
        ratio,
        h_norm,
        h_ratio,
        analytic_share,
        bound_holds: f_norm <= 3.0 * pf_norm + slack,
        h_bound_holds: h_norm <= PROJECTION_DELTA * phi_norm + slack,
    })
}

/// Distance helper shared with the kernel checks.
#[inline]
pub fn circle_distance(t1: f64, t2: f64) -> f64 {
    fold_angle(t1 - t2).abs()
}
