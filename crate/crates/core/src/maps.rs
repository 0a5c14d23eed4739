//! Seeded random test maps.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{CircleSamples, UnimodularSamples};

/// Independent generator for `(seed, stream)`.
pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Real trigonometric polynomial `Σ_{k=1}^{K} a_k cos kt + b_k sin kt`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigPhase {
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl TrigPhase {
    /// Random degree in `1..=max_degree`, scaled so that `Σ |a_k| + |b_k| = sup`.
    pub fn random(rng: &mut impl Rng, max_degree: usize, sup: f64) -> Self {
        let degree = rng.gen_range(1..=max_degree.max(1));
        let mut cos: Vec<f64> = (0..degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut sin: Vec<f64> = (0..degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let total: f64 = cos.iter().chain(&sin).map(|v| v.abs()).sum();
        let scale = if total > 0.0 { sup / total } else { 0.0 };
        cos.iter_mut()
            .chain(sin.iter_mut())
            .for_each(|v| *v *= scale);
        Self { cos, sin }
    }

    pub fn degree(&self) -> usize {
        self.cos.len()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.cos
            .iter()
            .zip(&self.sin)
            .enumerate()
            .map(|(k, (a, b))| {
                let (s, c) = ((k + 1) as f64 * t).sin_cos();
                a * c + b * s
            })
            .sum()
    }

    pub fn sample(&self, n: usize) -> Vec<f64> {
        (0..n)
            .map(|j| self.eval(std::f64::consts::TAU * j as f64 / n as f64))
            .collect()
    }

    /// `Σ |a_k| + |b_k|`, an upper bound on the sup norm.
    pub fn sup_bound(&self) -> f64 {
        self.cos.iter().chain(&self.sin).map(|v| v.abs()).sum()
    }

    /// Two-sided `‖·‖_{H^s}`: `(Σ_k k^{2s} (a_k² + b_k²) / 2)^{1/2}`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        self.cos
            .iter()
            .zip(&self.sin)
            .enumerate()
            .map(|(k, (a, b))| ((k + 1) as f64).powf(2.0 * s) * (a * a + b * b) / 2.0)
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            cos: self.cos.iter().map(|v| v * factor).collect(),
            sin: self.sin.iter().map(|v| v * factor).collect(),
        }
    }
}

/// `z^d e^{iφ}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseMap {
    pub degree: i64,
    pub phase: TrigPhase,
}

impl PhaseMap {
    pub fn samples(&self, n: usize) -> Result<UnimodularSamples> {
        let d = self.degree as f64;
        let s = CircleSamples::from_fn(n, |t| {
            Complex64::from_polar(1.0, d * t + self.phase.eval(t))
        })?;
        UnimodularSamples::new(s, 1e-12)
    }
}

/// Maps `z^d e^{iφ}` with `d` uniform in `[-max_degree, max_degree]` and `φ`
/// of degree at most `phase_degree` with sup at most `sup`.
pub fn random_phase_maps(
    seed: u64,
    count: usize,
    max_degree: i64,
    phase_degree: usize,
    sup: f64,
) -> Result<Vec<PhaseMap>> {
    if !(sup >= 0.0 && sup.is_finite()) || max_degree < 0 {
        return Err(Error::invalid(
            "degree range and sup bound must be nonnegative",
        ));
    }
    let mut r = rng(seed, 1);
    Ok((0..count)
        .map(|_| {
            let degree = r.gen_range(-max_degree..=max_degree);
            let sup_i = r.gen_range(0.25 * sup..=sup);
            PhaseMap {
                degree,
                phase: TrigPhase::random(&mut r, phase_degree, sup_i),
            }
        })
        .collect())
}

/// Degree-zero continuous maps `e^{iφ}`.
pub fn random_zero_degree_maps(
    seed: u64,
    count: usize,
    phase_degree: usize,
    sup: f64,
) -> Result<Vec<PhaseMap>> {
    let mut r = rng(seed, 2);
    Ok((0..count)
        .map(|_| PhaseMap {
            degree: 0,
            phase: TrigPhase::random(&mut r, phase_degree, sup),
        })
        .collect())
}

/// Phases with `‖φ‖_{H^s}` uniform in `[lo, hi)`.
pub fn random_small_phases(
    seed: u64,
    count: usize,
    phase_degree: usize,
    s: f64,
    lo: f64,
    hi: f64,
) -> Result<Vec<TrigPhase>> {
    if !(0.0 < lo && lo < hi) {
        return Err(Error::invalid("norm range must satisfy 0 < lo < hi"));
    }
    let mut r = rng(seed, 3);
    Ok((0..count)
        .map(|_| {
            let target = r.gen_range(lo..hi);
            let p = TrigPhase::random(&mut r, phase_degree, 1.0);
            p.scaled(target / p.sobolev_norm(s))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::degree_winding;
    use crate::norms::{sobolev_spectral, SobolevParams};
    use crate::spectrum::analyze_full;

    #[test]
    fn seeded_and_reproducible() {
        let a = random_phase_maps(5, 10, 5, 10, 2.0).unwrap();
        assert_eq!(a, random_phase_maps(5, 10, 5, 10, 2.0).unwrap());
        assert_ne!(a, random_phase_maps(6, 10, 5, 10, 2.0).unwrap());
        for m in &a {
            assert!(m.phase.degree() <= 10);
            assert!(m.phase.sup_bound() <= 2.0 + 1e-12);
            assert!(m.degree.abs() <= 5);
        }
    }

    #[test]
    fn winding_matches_requested_degree() {
        for m in random_phase_maps(1, 20, 5, 10, 2.0).unwrap() {
            assert_eq!(
                degree_winding(&m.samples(1024).unwrap()).unwrap().0,
                m.degree
            );
        }
    }

    #[test]
    fn small_phase_norms() {
        for s in [0.9, 1.2, 1.5] {
            for p in random_small_phases(3, 10, 6, s, 0.02, 0.09).unwrap() {
                let norm = p.sobolev_norm(s);
                assert!((0.02..0.09).contains(&norm));
                let c = analyze_full(&CircleSamples::from_real(&p.sample(256)).unwrap());
                let spectral = sobolev_spectral(&c, &SobolevParams::two_sided(s).unwrap()).sqrt();
                assert!((spectral - norm).abs() < 1e-12);
            }
        }
    }
}
