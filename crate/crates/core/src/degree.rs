//! Topological degree, by unwrapping the argument and by the spectral sum
//! `Σ n |a_n|²`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{synthesize, CircleSamples, FourierCoeffs, UnimodularSamples};

/// Phase steps at or beyond this are treated as ambiguous.
const MAX_STEP: f64 = PI * (1.0 - 1e-9);

/// Tail energy `Σ_{|n|>0.9M} |n||a_n|²` above which the spectral degree is flagged.
pub const TAIL_WARNING: f64 = 1e-6;

/// Residual from the nearest integer beyond which the spectral sum is reported
/// as unreliable.
pub const RESIDUAL_WARNING: f64 = 0.1;

/// Continuous argument of a sampled map with no vanishing sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseLift {
    values: Vec<f64>,
    winding: i64,
    max_step: f64,
}

impl PhaseLift {
    /// Unwrap by nearest-branch selection between consecutive samples.
    pub fn of(samples: &CircleSamples) -> Result<Self> {
        let v = samples.values();
        if let Some(i) = v.iter().position(|z| z.norm() == 0.0) {
            return Err(Error::ZeroSample(i));
        }
        let n = v.len();
        let mut values = Vec::with_capacity(n);
        let mut acc = v[0].arg();
        let mut max_step: f64 = 0.0;
        values.push(acc);
        for j in 0..n {
            let next = v[(j + 1) % n];
            let step = (next * v[j].conj()).arg();
            if step.abs() >= MAX_STEP {
                return Err(Error::InsufficientResolution { index: j, step });
            }
            max_step = max_step.max(step.abs());
            acc += step;
            if j + 1 < n {
                values.push(acc);
            }
        }
        let winding = ((acc - values[0]) / TAU).round() as i64;
        Ok(Self {
            values,
            winding,
            max_step,
        })
    }

    /// Wrap a real phase that is already continuous; `winding` must describe
    /// its increment over one period.
    pub fn from_values(values: Vec<f64>, winding: i64) -> Self {
        let n = values.len();
        let max_step = (0..n)
            .map(|j| {
                let next = if j + 1 < n {
                    values[j + 1]
                } else {
                    values[0] + TAU * winding as f64
                };
                (next - values[j]).abs()
            })
            .fold(0.0, f64::max);
        Self {
            values,
            winding,
            max_step,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn winding(&self) -> i64 {
        self.winding
    }

    pub fn max_step(&self) -> f64 {
        self.max_step
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }
}

/// Winding number of the sampled map and the largest phase step seen.
pub fn degree_winding(f: &UnimodularSamples) -> Result<(i64, f64)> {
    let lift = PhaseLift::of(f.samples())?;
    Ok((lift.winding, lift.max_step))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeResult {
    pub spectral_sum: f64,
    pub rounded: i64,
    pub residual: f64,
    /// Winding of the synthesized boundary map, when it was computed.
    pub winding: Option<i64>,
    pub tail_energy: f64,
    pub tail_warning: bool,
}

impl DegreeResult {
    pub fn agrees(&self) -> bool {
        self.winding.is_none_or(|w| w == self.rounded) && self.residual <= RESIDUAL_WARNING
    }
}

/// Spectral degree `Σ_{n=-M}^{M} n |a_n|²`, rounded to the nearest integer.
pub fn degree_brezis(coeffs: &FourierCoeffs) -> DegreeResult {
    let mut terms: Vec<f64> = Vec::with_capacity(coeffs.values().len());
    let mut tail = 0.0;
    let cut = 0.9 * coeffs.bandwidth() as f64;
    for (n, a) in coeffs.iter() {
        let w = a.norm_sqr();
        terms.push(n as f64 * w);
        if n.unsigned_abs() as f64 > cut {
            tail += n.unsigned_abs() as f64 * w;
        }
    }
    // sum negative and positive halves separately to limit cancellation
    let m = coeffs.bandwidth();
    let neg: f64 = terms[..m].iter().rev().sum();
    let pos: f64 = terms[m + 1..].iter().rev().sum();
    let spectral_sum = pos + neg;
    let rounded = spectral_sum.round() as i64;
    DegreeResult {
        spectral_sum,
        rounded,
        residual: (spectral_sum - rounded as f64).abs(),
        winding: None,
        tail_energy: tail,
        tail_warning: tail > TAIL_WARNING,
    }
}

/// Spectral degree together with the winding of the synthesized map on `grid`
/// samples.
pub fn degree_both(coeffs: &FourierCoeffs, grid: usize) -> Result<DegreeResult> {
    let mut r = degree_brezis(coeffs);
    let samples = synthesize(coeffs, grid)?;
    r.winding = Some(PhaseLift::of(&samples)?.winding);
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroDegreeIdentity {
    /// `Σ |n| |a_n|²`
    pub two_sided: f64,
    /// `2 Σ_{n>0} n |a_n|²`
    pub twice_positive: f64,
    pub residual: f64,
}

/// For a degree-zero map the two-sided `H^{1/2}` sum equals twice its
/// positive half. Rejects maps whose spectral degree is not zero.
pub fn check_zero_degree_identity(coeffs: &FourierCoeffs) -> Result<ZeroDegreeIdentity> {
    let d = degree_brezis(coeffs);
    if d.rounded != 0 {
        return Err(Error::NonzeroDegree(d.rounded));
    }
    if d.residual > RESIDUAL_WARNING {
        return Err(Error::precondition(format!(
            "spectral degree residual {:.3e} too large to certify degree zero",
            d.residual
        )));
    }
    let mut two_sided = 0.0;
    let mut positive = 0.0;
    for (n, a) in coeffs.iter() {
        let w = n.unsigned_abs() as f64 * a.norm_sqr();
        two_sided += w;
        if n > 0 {
            positive += w;
        }
    }
    Ok(ZeroDegreeIdentity {
        two_sided,
        twice_positive: 2.0 * positive,
        residual: (two_sided - 2.0 * positive).abs(),
    })
}

/// Coefficients of `z^{-d} f`: `a_n ↦ a_{n+d}` on the same bandwidth.
/// Returns the shifted coefficients and the energy pushed out of range.
pub fn normalize_degree(coeffs: &FourierCoeffs, d: i64) -> Result<(FourierCoeffs, f64)> {
    let m = coeffs.bandwidth();
    if d.unsigned_abs() as usize > m {
        return Err(Error::invalid(format!("shift {d} exceeds bandwidth {m}")));
    }
    let shifted = FourierCoeffs::from_fn(m, |n| coeffs.get(n + d));
    let lim = m as i64;
    let truncated = coeffs
        .iter()
        .filter(|(n, _)| !(-lim..=lim).contains(&(n - d)))
        .map(|(_, a)| a.norm_sqr())
        .sum();
    Ok((shifted, truncated))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::{analyze, analyze_full};
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn unimodular<F: Fn(f64) -> Complex64>(n: usize, f: F) -> UnimodularSamples {
        UnimodularSamples::new(CircleSamples::from_fn(n, f).unwrap(), 1e-10).unwrap()
    }

    fn moebius(a: f64) -> impl Fn(f64) -> Complex64 {
        move |t| {
            let z = Complex64::from_polar(1.0, t);
            (a - z) / (1.0 - a * z)
        }
    }

    #[test]
    fn winding_examples() {
        let z5 = unimodular(256, |t| Complex64::from_polar(1.0, 5.0 * t));
        assert_eq!(degree_winding(&z5).unwrap().0, 5);
        let null = unimodular(256, |t| Complex64::from_polar(1.0, 0.4 * t.sin()));
        assert_eq!(degree_winding(&null).unwrap().0, 0);
    }

    #[test]
    fn moebius_winding_matches_argument_principle() {
        // (0.9 - z)/(1 - 0.9z): one zero inside the disk, pole outside
        let f = unimodular(4096, moebius(0.9));
        let zeros_inside = 1;
        let poles_inside = 0;
        assert_eq!(degree_winding(&f).unwrap().0, zeros_inside - poles_inside);
    }

    #[test]
    fn coarse_grid_reports_resolution() {
        // consecutive samples of z^4 on 8 points are antipodal
        let f = unimodular(8, |t| Complex64::from_polar(1.0, 4.0 * t));
        assert!(matches!(
            degree_winding(&f),
            Err(Error::InsufficientResolution { .. })
        ));
    }

    #[test]
    fn spectral_degree_of_modes() {
        for k in -6..=6 {
            let d = degree_brezis(&FourierCoeffs::mode(k).with_bandwidth(8));
            assert_eq!(d.spectral_sum, k as f64);
            assert_eq!(d.rounded, k);
            assert_eq!(d.residual, 0.0);
        }
    }

    #[test]
    fn conjugated_blaschke_has_negative_degree() {
        let b = |t: f64| moebius(0.3)(t) * moebius(-0.6)(t);
        let f = unimodular(1024, |t| b(t).conj());
        let coeffs = analyze_full(f.samples());
        let d = degree_brezis(&coeffs);
        assert_eq!(d.rounded, -2);
        assert!(d.residual < 1e-10);
        assert_eq!(degree_winding(&f).unwrap().0, -2);
    }

    #[test]
    fn identity_on_degree_zero_maps() {
        let f = unimodular(1024, |t| Complex64::from_polar(1.0, t.sin()));
        let id = check_zero_degree_identity(&analyze_full(f.samples())).unwrap();
        assert!(id.residual < 1e-8, "{id:?}");
        let id0 = check_zero_degree_identity(&FourierCoeffs::mode(0)).unwrap();
        assert_eq!((id0.two_sided, id0.twice_positive), (0.0, 0.0));
        assert!(matches!(
            check_zero_degree_identity(&FourierCoeffs::mode(2)),
            Err(Error::NonzeroDegree(2))
        ));
    }

    #[test]
    fn shifting_examples() {
        let (c, lost) = normalize_degree(&FourierCoeffs::mode(3), 3).unwrap();
        assert_eq!(c.get(0), Complex64::new(1.0, 0.0));
        assert_eq!(c.energy(), 1.0);
        assert_eq!(lost, 0.0);
        assert!(normalize_degree(&FourierCoeffs::mode(3), 4).is_err());

        let f = unimodular(512, moebius(0.5));
        let coeffs = analyze_full(f.samples());
        assert_eq!(degree_brezis(&coeffs).rounded, 1);
        let (shifted, _) = normalize_degree(&coeffs, 1).unwrap();
        let d = degree_brezis(&shifted);
        assert_eq!(d.rounded, 0);
        assert!(d.residual < 1e-10);
    }

    #[test]
    fn shift_reports_truncated_energy() {
        let (_, lost) = normalize_degree(&FourierCoeffs::mode(-3), 1).unwrap();
        assert_eq!(lost, 1.0);
    }

    #[test]
    fn degree_both_cross_checks() {
        let f = unimodular(256, |t| {
            Complex64::from_polar(1.0, 3.0 * t + 0.5 * (2.0 * t).cos())
        });
        let coeffs = analyze(f.samples(), 100).unwrap();
        let d = degree_both(&coeffs, 512).unwrap();
        assert_eq!(d.winding, Some(3));
        assert!(d.agrees());
    }

    fn random_phase(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        let a: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-0.6..0.6));
        (0..n)
            .map(|j| {
                let t = std::f64::consts::TAU * j as f64 / n as f64;
                a[0] * t.sin() + a[1] * (2.0 * t).cos() + a[2] * (3.0 * t).sin() + a[3]
            })
            .collect()
    }

    #[test]
    fn winding_is_additive_on_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 1024;
        for _ in 0..50 {
            let (d1, d2) = (rng.gen_range(-4..=4i64), rng.gen_range(-4..=4i64));
            let (p1, p2) = (random_phase(&mut rng, n), random_phase(&mut rng, n));
            let build = |d: i64, p: &[f64]| {
                let ph: Vec<f64> = p
                    .iter()
                    .enumerate()
                    .map(|(j, x)| x + d as f64 * std::f64::consts::TAU * j as f64 / n as f64)
                    .collect();
                UnimodularSamples::from_phase(&ph).unwrap()
            };
            let (f, g) = (build(d1, &p1), build(d2, &p2));
            let fg = UnimodularSamples::new(f.samples().mul(g.samples()).unwrap(), 1e-10).unwrap();
            let (wf, wg, wfg) = (
                degree_winding(&f).unwrap().0,
                degree_winding(&g).unwrap().0,
                degree_winding(&fg).unwrap().0,
            );
            assert_eq!((wf, wg), (d1, d2));
            assert_eq!(wfg, wf + wg);
        }
    }

    proptest! {
        #[test]
        fn spectral_degree_is_rotation_invariant(theta in -3.0f64..3.0, d in -3i64..=3) {
            let f = unimodular(512, |t| Complex64::from_polar(1.0, d as f64 * t + 0.7 * t.sin()));
            let c = analyze_full(f.samples());
            let rotated = c.scale(Complex64::from_polar(1.0, theta));
            let (a, b) = (degree_brezis(&c), degree_brezis(&rotated));
            prop_assert!((a.spectral_sum - b.spectral_sum).abs() < 1e-12);
            prop_assert_eq!(a.rounded, d);
        }

        #[test]
        fn shift_round_trip(seed in 0u64..1000, d in -8i64..=8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = 16usize;
            // keep support inside [-M/2, M/2] so the shift cannot truncate
            let c = FourierCoeffs::from_fn(m, |n| {
                if n.unsigned_abs() as usize <= m / 2 {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            let (s, lost) = normalize_degree(&c, d).unwrap();
            let (back, lost2) = normalize_degree(&s, -d).unwrap();
            prop_assert_eq!(lost, 0.0);
            prop_assert_eq!(lost2, 0.0);
            prop_assert_eq!(back, c);
        }
    }
}
