//! Smoothing, polar decomposition and outer-factor correction of a
//! degree-zero unimodular map, with the bound chains that transfer a
//! one-sided Sobolev bound to a two-sided one.
//!
//! Every stage works on a fixed sample grid. Quantities that the argument
//! needs as inequalities are recorded as [`Check`]s; fitted constants are
//! recorded as [`Observation`]s.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degree::{degree_brezis, PhaseLift};
use crate::error::{Error, Result};
use crate::norms::{
    bmo_norm_real, dyadic_scales, sobolev_spectral, vmo_profile, BmoGrid, SobolevParams,
};
use crate::quadrature::shift_double_integrals;
use crate::report::{Check, Observation};
use crate::spectrum::{
    analyze_full, apply_multiplier, hilbert_real, pairwise_sum, project, smooth, synthesize,
    CircleSamples, FourierCoeffs, SmootherFamily, SmootherSpec, UnimodularSamples, Upper,
};

/// Unimodularity tolerance of the corrected map `H = h R`.
pub const H_TOL: f64 = 1e-8;

/// Absolute slack on chained norm inequalities.
const ROUNDOFF: f64 = 1e-13;

/// Energies below this are treated as zero in relative comparisons.
const ENERGY_FLOOR: f64 = 1e-20;

/// `lhs ≤ rhs` up to relative `rel` plus [`ROUNDOFF`].
fn chained(name: String, anchor: &str, lhs: f64, rhs: f64, rel: f64) -> Check {
    Check::le(name, anchor, lhs, rhs, rel * rhs.abs() + ROUNDOFF)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Strictly decreasing smoothing scales in `(0, 1]`.
    pub eps_schedule: Vec<f64>,
    /// Small-argument threshold.
    pub delta0: f64,
    /// Smallest admissible modulus of the smoothed map.
    pub rho_floor: f64,
    /// A stage is used only when `‖1 - ρ‖_∞` is below this.
    pub rho_gate: f64,
    pub family: SmootherFamily,
    /// Relative slack on the explicit-constant bounds.
    pub bound_slack: f64,
    /// Absolute tolerance on exact algebraic identities.
    pub identity_tol: f64,
    /// Relative spread allowed across the schedule.
    pub uniformity_tol: f64,
    pub bmo: BmoGrid,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            eps_schedule: vec![1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0],
            delta0: 0.1,
            rho_floor: 0.25,
            rho_gate: 0.1,
            family: SmootherFamily::default(),
            bound_slack: 0.01,
            identity_tol: 1e-8,
            uniformity_tol: 0.05,
            bmo: BmoGrid::default(),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.eps_schedule.is_empty() {
            return Err(Error::invalid("empty smoothing schedule"));
        }
        if self.eps_schedule.iter().any(|e| !(*e > 0.0 && *e <= 1.0)) {
            return Err(Error::invalid("smoothing scales must lie in (0, 1]"));
        }
        if self.eps_schedule.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::invalid(
                "smoothing schedule must be strictly decreasing",
            ));
        }
        if !(self.delta0 > 0.0 && self.delta0 <= FRAC_PI_4) {
            return Err(Error::invalid(format!(
                "delta0 = {} outside (0, π/4]",
                self.delta0
            )));
        }
        if !(self.rho_floor > 0.0 && self.rho_floor <= 0.5) {
            return Err(Error::invalid(format!(
                "rho floor {} outside (0, 1/2]",
                self.rho_floor
            )));
        }
        if !(self.rho_gate > 0.0 && self.rho_gate < 1.0) {
            return Err(Error::invalid(format!(
                "rho gate {} outside (0, 1)",
                self.rho_gate
            )));
        }
        Ok(())
    }
}

/// `h = ρ e^{iφ}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarParts {
    pub rho: Vec<f64>,
    pub phi: PhaseLift,
}

impl PolarParts {
    pub fn reconstruct(&self) -> CircleSamples {
        CircleSamples::new(
            self.rho
                .iter()
                .zip(self.phi.values())
                .map(|(&r, &p)| Complex64::from_polar(r, p))
                .collect(),
        )
        .expect("polar parts share the grid")
    }

    /// `‖1 - ρ‖_∞`.
    pub fn modulus_gap(&self) -> f64 {
        self.rho.iter().map(|r| (1.0 - r).abs()).fold(0.0, f64::max)
    }

    /// `‖1/ρ‖_∞`.
    pub fn inverse_sup(&self) -> f64 {
        self.rho.iter().map(|r| 1.0 / r).fold(0.0, f64::max)
    }
}

pub fn polar(h: &CircleSamples, rho_floor: f64) -> Result<PolarParts> {
    let rho: Vec<f64> = h.values().iter().map(|z| z.norm()).collect();
    let min = rho.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min > rho_floor) {
        return Err(Error::ModulusCollapsed {
            min,
            floor: rho_floor,
        });
    }
    Ok(PolarParts {
        rho,
        phi: PhaseLift::of(h)?,
    })
}

/// `R = exp(-log ρ + i H(log ρ))`: modulus `1/ρ`, spectrum in `n ≤ 0`.
pub fn outer(rho: &[f64]) -> Result<CircleSamples> {
    if let Some(i) = rho.iter().position(|r| !(*r > 0.0)) {
        return Err(Error::invalid(format!(
            "modulus {} at sample {i} is not positive",
            rho[i]
        )));
    }
    let n = rho.len();
    let log_rho: Vec<Complex64> = rho.iter().map(|r| Complex64::new(r.ln(), 0.0)).collect();
    // -1 + i(-i sgn n), with the Nyquist bin kept real
    let exponent = apply_multiplier(&log_rho, |k| {
        let m = if k.unsigned_abs() as usize * 2 == n {
            -1.0
        } else {
            -1.0 + k.signum() as f64
        };
        Complex64::new(m, 0.0)
    });
    CircleSamples::new(exponent.into_iter().map(|w| w.exp()).collect())
}

/// Share of the energy of `samples` at positive frequencies.
pub fn analytic_share(samples: &CircleSamples) -> f64 {
    let c = analyze_full(samples);
    let total = c.energy();
    if total == 0.0 {
        0.0
    } else {
        c.positive_energy() / total
    }
}

/// `h_ε`, its polar parts, the outer factor `R_ε` and `H_ε = h_ε R_ε`.
#[derive(Clone, Debug)]
pub struct Correction {
    pub eps: f64,
    pub cutoff: usize,
    pub h: CircleSamples,
    pub polar: PolarParts,
    pub r: CircleSamples,
    pub big_h: UnimodularSamples,
}

pub fn build_h(f: &UnimodularSamples, eps: f64, cfg: &PipelineConfig) -> Result<Correction> {
    let spec = SmootherSpec::new(cfg.family, eps)?;
    let h = smooth(f.samples(), &spec);
    let polar = polar(&h, cfg.rho_floor)?;
    let r = outer(&polar.rho)?;
    let big_h = UnimodularSamples::new(h.mul(&r)?, H_TOL)?;
    Ok(Correction {
        eps,
        cutoff: spec.cutoff(),
        h,
        polar,
        r,
        big_h,
    })
}

/// Dyadic blocks `(k, lo, hi)` meeting `[1, m]`, clipped at `m`.
fn blocks(m: usize) -> Vec<(u32, i64, i64)> {
    let m = m as i64;
    (0u32..)
        .map(crate::spectrum::dyadic_block)
        .zip(0u32..)
        .take_while(|((lo, _), _)| *lo <= m)
        .map(|((lo, hi), k)| (k, lo, hi.min(m)))
        .collect()
}

fn norm(c: &FourierCoeffs) -> f64 {
    c.energy().sqrt()
}

fn block(c: &FourierCoeffs, lo: i64, hi: i64) -> FourierCoeffs {
    project(c, lo, Upper::At(hi)).expect("dyadic blocks are nonempty")
}

fn tail(c: &FourierCoeffs, lo: i64) -> FourierCoeffs {
    project(c, lo, Upper::Infinity).expect("half-lines are nonempty")
}

/// Keep the check with the smallest margin relative to its scale.
fn worst(checks: Vec<Check>) -> Option<Check> {
    let key =
        |c: &Check| (c.margin + c.tolerance) / c.rhs.abs().max(c.lhs.abs()).max(f64::MIN_POSITIVE);
    checks
        .into_iter()
        .reduce(|a, b| if key(&b) < key(&a) { b } else { a })
}

/// Per dyadic block: the projection identity
/// `P_b H = P_b (R · P_{≥lo} h)` and the chain
/// `‖P_b H‖ ≤ ‖R P_{≥lo} h‖ ≤ ‖1/ρ‖_∞ ‖P_{≥lo} h‖ ≤ 2 ‖P_{≥lo} f‖`.
struct BlockChain {
    identity_residual: f64,
    links: [Option<Check>; 3],
    /// `(k, ‖P_b H‖², ‖P_{≥lo} f‖²)` per block.
    energies: Vec<(u32, f64, f64)>,
}

fn block_chain(c: &Correction, fc: &FourierCoeffs, tag: &str) -> Result<BlockChain> {
    let n = c.h.len();
    let hc = analyze_full(&c.h);
    let big = analyze_full(c.big_h.samples());
    let inv_rho = c.polar.inverse_sup();
    let rows: Vec<Result<(f64, [Check; 3], (u32, f64, f64))>> = blocks(hc.bandwidth())
        .into_par_iter()
        .map(|(k, lo, hi)| {
            let pb_big = block(&big, lo, hi);
            let tail_h = tail(&hc, lo);
            let rt = analyze_full(&c.r.mul(&synthesize(&tail_h, n)?)?);
            let residual = norm(&pb_big.sub(&block(&rt, lo, hi)));
            let n1 = norm(&pb_big);
            let n2 = norm(&rt);
            let n3 = inv_rho * norm(&tail_h);
            let tail_f = norm(&tail(fc, lo));
            let n4 = 2.0 * tail_f;
            let tol = 1e-12;
            Ok((
                residual,
                [
                    chained(
                        format!("{tag}.block-norm[k={k}]"),
                        "projection contracts the block norm",
                        n1,
                        n2,
                        tol,
                    ),
                    chained(
                        format!("{tag}.outer-factor[k={k}]"),
                        "L2 bound by the sup of the outer factor",
                        n2,
                        n3,
                        tol,
                    ),
                    chained(
                        format!("{tag}.factor-two[k={k}]"),
                        "inverse modulus at most two, smoothing contracts",
                        n3,
                        n4,
                        tol,
                    ),
                ],
                (k, n1 * n1, tail_f * tail_f),
            ))
        })
        .collect();
    let mut identity_residual: f64 = 0.0;
    let mut per_link: [Vec<Check>; 3] = Default::default();
    let mut energies = Vec::new();
    for row in rows {
        let (res, checks, e) = row?;
        identity_residual = identity_residual.max(res);
        for (slot, ch) in per_link.iter_mut().zip(checks) {
            slot.push(ch);
        }
        energies.push(e);
    }
    let links = per_link.map(worst);
    Ok(BlockChain {
        identity_residual,
        links,
        energies,
    })
}

fn eps_tag(case: &str, eps: f64) -> String {
    format!("{case}[eps={eps}]")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfStage {
    pub eps: f64,
    pub cutoff: usize,
    /// `‖1 - ρ_ε‖_∞`, absent when the modulus collapsed.
    pub rho_gap: Option<f64>,
    pub gated: bool,
    pub inverse_rho_sup: f64,
    pub winding: i64,
    pub identity_residual: f64,
    /// `Σ_{n>0} n |Ĥ(n)|²`.
    pub positive: f64,
    /// `Σ_k 2^k ‖P_b H‖²`.
    pub dyadic: f64,
    /// `Σ |n| |Ĥ(n)|²`.
    pub two_sided: f64,
    /// `‖H_ε - f‖₂`.
    pub l2_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfCaseReport {
    /// One-sided `s = 1/2` sum of the input.
    pub c: f64,
    pub two_sided: f64,
    pub stages: Vec<HalfStage>,
    pub checks: Vec<Check>,
    pub observations: Vec<Observation>,
}

impl HalfCaseReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn gated_stages(&self) -> impl Iterator<Item = &HalfStage> {
        self.stages.iter().filter(|s| s.gated)
    }
}

fn require_degree_zero(fc: &FourierCoeffs) -> Result<()> {
    let d = degree_brezis(fc);
    if d.rounded != 0 {
        return Err(Error::NonzeroDegree(d.rounded));
    }
    Ok(())
}

/// Does `cfg` admit the stage at `eps`? Returns the correction when it does.
fn gate(
    f: &UnimodularSamples,
    eps: f64,
    cfg: &PipelineConfig,
) -> Result<(Option<f64>, Option<Correction>)> {
    match build_h(f, eps, cfg) {
        Ok(c) => {
            let gap = c.polar.modulus_gap();
            Ok((Some(gap), (gap < cfg.rho_gate).then_some(c)))
        }
        Err(Error::ModulusCollapsed { .. }) => Ok((None, None)),
        Err(e) => Err(e),
    }
}

/// The `s = 1/2` chain: for every admitted `ε`, `Σ_{n>0} n|Ĥ_ε(n)|² ≤ 16C`
/// and `Σ |n||Ĥ_ε(n)|² ≤ 32C` where `C` is the one-sided sum of `f`.
pub fn verify_half_case(f: &UnimodularSamples, cfg: &PipelineConfig) -> Result<HalfCaseReport> {
    cfg.validate()?;
    let fc = analyze_full(f.samples());
    require_degree_zero(&fc)?;
    let one = SobolevParams::one_sided(0.5)?;
    let two = SobolevParams::two_sided(0.5)?;
    let c = sobolev_spectral(&fc, &one);
    let two_sided_f = sobolev_spectral(&fc, &two);

    let staged: Vec<Result<(HalfStage, Vec<Check>)>> = cfg
        .eps_schedule
        .par_iter()
        .map(|&eps| half_stage(f, &fc, eps, c, cfg))
        .collect();
    let mut stages = Vec::new();
    let mut checks = Vec::new();
    let mut observations = Vec::new();
    for s in staged {
        let (stage, ch) = s?;
        observations.push(Observation::new(
            format!("{}.rho-gap", eps_tag("half", stage.eps)),
            stage.rho_gap.unwrap_or(f64::NAN),
        ));
        stages.push(stage);
        checks.extend(ch);
    }
    let gated: Vec<&HalfStage> = stages.iter().filter(|s| s.gated).collect();
    checks.push(Check::holds(
        "half.admitted-stages",
        "some smoothing scale passes the modulus gate",
        !gated.is_empty(),
    ));
    for w in gated.windows(2) {
        checks.push(Check::le(
            format!("half.l2-convergence[eps={}]", w[1].eps),
            "corrected maps converge in L2",
            w[1].l2_distance,
            w[0].l2_distance,
            1e-12,
        ));
    }
    checks.push(Check::le_rel(
        "half.final-bound",
        "two-sided bound 32C",
        two_sided_f,
        32.0 * c,
        cfg.bound_slack,
    ));
    if c > 0.0 {
        observations.push(Observation::new(
            "half.two-sided-over-one-sided",
            two_sided_f / c,
        ));
    }
    Ok(HalfCaseReport {
        c,
        two_sided: two_sided_f,
        stages,
        checks,
        observations,
    })
}

fn half_stage(
    f: &UnimodularSamples,
    fc: &FourierCoeffs,
    eps: f64,
    c: f64,
    cfg: &PipelineConfig,
) -> Result<(HalfStage, Vec<Check>)> {
    let spec = SmootherSpec::new(cfg.family, eps)?;
    let (rho_gap, corr) = gate(f, eps, cfg)?;
    let mut stage = HalfStage {
        eps,
        cutoff: spec.cutoff(),
        rho_gap,
        gated: corr.is_some(),
        inverse_rho_sup: f64::NAN,
        winding: 0,
        identity_residual: f64::NAN,
        positive: f64::NAN,
        dyadic: f64::NAN,
        two_sided: f64::NAN,
        l2_distance: f64::NAN,
    };
    let Some(corr) = corr else {
        return Ok((stage, Vec::new()));
    };
    let tag = eps_tag("half", eps);
    let big = analyze_full(corr.big_h.samples());
    let chain = block_chain(&corr, fc, &tag)?;
    let one = SobolevParams::one_sided(0.5)?;
    let two = SobolevParams::two_sided(0.5)?;
    stage.inverse_rho_sup = corr.polar.inverse_sup();
    stage.winding = PhaseLift::of(corr.big_h.samples())?.winding();
    stage.identity_residual = chain.identity_residual;
    stage.positive = sobolev_spectral(&big, &one);
    stage.dyadic = chain
        .energies
        .iter()
        .map(|(k, e, _)| (1u64 << k) as f64 * e)
        .sum();
    let dyadic_f: f64 = chain
        .energies
        .iter()
        .map(|(k, _, t)| 4.0 * (1u64 << k) as f64 * t)
        .sum();
    stage.two_sided = sobolev_spectral(&big, &two);
    stage.l2_distance = corr.big_h.samples().sub(f.samples())?.l2_norm();

    let mut checks = vec![
        Check::holds(
            format!("{tag}.degree"),
            "correction preserves degree zero",
            stage.winding == 0,
        ),
        Check::residual(
            format!("{tag}.block-identity"),
            "anti-analytic block identity",
            chain.identity_residual,
            cfg.identity_tol,
        ),
        Check::le(
            format!("{tag}.inverse-modulus"),
            "inverse modulus at most two",
            stage.inverse_rho_sup,
            2.0,
            0.0,
        ),
    ];
    checks.extend(chain.links.into_iter().flatten());
    checks.extend([
        chained(
            format!("{tag}.dyadic-majorant"),
            "positive-frequency sum below dyadic majorant",
            stage.positive,
            stage.dyadic,
            1e-12,
        ),
        chained(
            format!("{tag}.dyadic-tails"),
            "dyadic majorant below weighted tails",
            stage.dyadic,
            dyadic_f,
            1e-12,
        ),
        chained(
            format!("{tag}.tails-16c"),
            "weighted tails below 16C",
            dyadic_f,
            16.0 * c,
            1e-12,
        ),
        Check::le_rel(
            format!("{tag}.positive-16c"),
            "positive-frequency bound 16C",
            stage.positive,
            16.0 * c,
            cfg.bound_slack,
        ),
        Check::le_rel(
            format!("{tag}.two-sided-32c"),
            "two-sided bound 32C",
            stage.two_sided,
            32.0 * c,
            cfg.bound_slack,
        ),
    ]);
    Ok((stage, checks))
}

/// `f = g e^{iψ}` with `ψ` a trigonometric polynomial and `|arg g| < δ₀`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub g: UnimodularSamples,
    /// `e^{iψ}`.
    pub multiplier: CircleSamples,
    pub psi: Vec<f64>,
    /// Continuous argument of `g`, bounded by `δ₀`.
    pub residual_phase: Vec<f64>,
    /// Fourier cutoff of `ψ`; zero when `f` needed no reduction.
    pub cutoff: usize,
}

impl Reduction {
    pub fn residual_sup(&self) -> f64 {
        self.residual_phase
            .iter()
            .map(|x| x.abs())
            .fold(0.0, f64::max)
    }
}

fn truncate_real(values: &[f64], cutoff: usize) -> Vec<f64> {
    let input: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    apply_multiplier(&input, |k| {
        Complex64::new(
            if k.unsigned_abs() as usize <= cutoff {
                1.0
            } else {
                0.0
            },
            0.0,
        )
    })
    .into_iter()
    .map(|z| z.re)
    .collect()
}

/// Divide `f` by `e^{iψ}`, `ψ` the Fourier truncation of its argument with
/// cutoff doubled until the remaining argument is below `delta0`.
pub fn reduce_argument(f: &UnimodularSamples, delta0: f64) -> Result<Reduction> {
    if !(delta0 > 0.0) {
        return Err(Error::invalid(format!("target {delta0} must be positive")));
    }
    let lift = PhaseLift::of(f.samples())?;
    if lift.winding() != 0 {
        return Err(Error::NonzeroDegree(lift.winding()));
    }
    let phi = lift.values();
    let n = phi.len();
    let finish = |psi: Vec<f64>, cutoff: usize| -> Result<Reduction> {
        let residual_phase: Vec<f64> = phi.iter().zip(&psi).map(|(p, q)| p - q).collect();
        let multiplier =
            CircleSamples::new(psi.iter().map(|&q| Complex64::from_polar(1.0, q)).collect())?;
        let g = CircleSamples::new(
            f.values()
                .iter()
                .zip(&psi)
                .map(|(&z, &q)| z * Complex64::from_polar(1.0, -q))
                .collect(),
        )?;
        Ok(Reduction {
            g: UnimodularSamples::new(g, f.tol() + 1e-12)?,
            multiplier,
            psi,
            residual_phase,
            cutoff,
        })
    };
    if lift.sup_norm() < delta0 {
        return finish(vec![0.0; n], 0);
    }
    let mut cutoff = 1;
    let mut residual = f64::INFINITY;
    while cutoff < n / 2 {
        let psi = truncate_real(phi, cutoff);
        residual = phi
            .iter()
            .zip(&psi)
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max);
        if residual < delta0 {
            return finish(psi, cutoff);
        }
        cutoff *= 2;
    }
    Err(Error::ReductionFailed {
        target: delta0,
        residual,
        cutoff: n / 2,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallStage {
    pub eps: f64,
    pub rho_gap: Option<f64>,
    pub gated: bool,
    /// `‖φ_ε‖_∞` and its mean oscillation.
    pub phi_sup: f64,
    pub phi_bmo: f64,
    /// `Σ_{n>0} n^{2s} |Ĥ(n)|²`.
    pub positive: f64,
    /// `Σ_k 4^{ks} ‖P_b H‖²`.
    pub dyadic: f64,
    /// `Σ_k 4^{ks+1} ‖P_{≥2^{k-1}} g‖²`.
    pub dyadic_tails: f64,
    /// `4^{s+1} (1 - 4^{-s})^{-1} Σ_{n>0} n^{2s} |ĝ(n)|²`.
    pub closed_form: f64,
    pub two_sided: f64,
    /// `Σ_k 4^{ks} ‖P_b Φ‖₂²` for the phase `Φ` of `H`.
    pub quadratic: f64,
    /// `Σ_{k>0} 4^{ks} ‖P_b Φ‖₃³`.
    pub cubic: f64,
    /// `∬ |ΔΦ|² ‖τ‖^{-1-2s}`, `∬ |ΔΦ|³ ‖τ‖^{-1-2s}`, `∬ |ΔH|² ‖τ‖^{-1-2s}`.
    pub t2: f64,
    pub t3: f64,
    pub e2: f64,
    /// `Σ sgn(n) |n|^{2s} |Ĥ(n)|²`.
    pub j_limit: f64,
    pub c0_fit: f64,
    pub a_fit: f64,
    pub b_fit: f64,
    /// `quadratic - b_fit (c0_fit + 1) cubic`.
    pub margin: f64,
    /// Largest `‖P_b Φ‖_∞ / ‖Φ‖_BMO` over blocks.
    pub block_sup_over_bmo: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallCaseReport {
    pub s: f64,
    pub reduction_cutoff: usize,
    pub reduced_sup: f64,
    pub two_sided: f64,
    pub one_sided: f64,
    pub stages: Vec<SmallStage>,
    pub checks: Vec<Check>,
    pub observations: Vec<Observation>,
}

impl SmallCaseReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn gated_stages(&self) -> impl Iterator<Item = &SmallStage> {
        self.stages.iter().filter(|s| s.gated)
    }
}

fn ratio_or_zero(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else {
        0.0
    }
}

/// The `0 < s < 1/2` small-argument chain on `f` after argument reduction.
pub fn verify_small_case(
    f: &UnimodularSamples,
    s: f64,
    cfg: &PipelineConfig,
) -> Result<SmallCaseReport> {
    cfg.validate()?;
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::invalid(format!("smoothness {s} outside (0, 1)")));
    }
    let red = reduce_argument(f, cfg.delta0)?;
    let g = &red.g;
    let gc = analyze_full(g.samples());
    require_degree_zero(&gc)?;
    let one = SobolevParams::one_sided(s)?;
    let two = SobolevParams::two_sided(s)?;
    let one_g = sobolev_spectral(&gc, &one);
    let two_g = sobolev_spectral(&gc, &two);

    let staged: Vec<Result<(SmallStage, Vec<Check>)>> = cfg
        .eps_schedule
        .par_iter()
        .map(|&eps| small_stage(g, &gc, eps, s, one_g, cfg))
        .collect();
    let mut stages = Vec::new();
    let mut checks = vec![Check::lt(
        "small.reduced-argument",
        "argument below delta0 after reduction",
        red.residual_sup(),
        cfg.delta0,
    )];
    let mut observations = vec![Observation::new(
        "small.reduction-cutoff",
        red.cutoff as f64,
    )];
    for st in staged {
        let (stage, ch) = st?;
        if stage.gated {
            let tag = eps_tag("small", stage.eps);
            observations.extend([
                Observation::new(format!("{tag}.c0-fit"), stage.c0_fit),
                Observation::new(format!("{tag}.a-fit"), stage.a_fit),
                Observation::new(format!("{tag}.b-fit"), stage.b_fit),
                Observation::new(
                    format!("{tag}.block-sup-over-bmo"),
                    stage.block_sup_over_bmo,
                ),
            ]);
        }
        stages.push(stage);
        checks.extend(ch);
    }
    let gated: Vec<&SmallStage> = stages.iter().filter(|s| s.gated).collect();
    checks.push(Check::holds(
        "small.admitted-stages",
        "some smoothing scale passes the modulus gate",
        !gated.is_empty(),
    ));
    if let (Some(lo), Some(hi)) = (
        gated.iter().map(|s| s.two_sided).reduce(f64::min),
        gated.iter().map(|s| s.two_sided).reduce(f64::max),
    ) {
        checks.push(Check::le(
            "small.uniform-in-eps",
            "two-sided norm uniform in epsilon",
            hi,
            lo,
            cfg.uniformity_tol * lo + ENERGY_FLOOR,
        ));
    }
    if let Some(last) = gated.last() {
        let gap = (last.two_sided - two_g).abs() / two_g.max(ENERGY_FLOOR);
        checks.push(Check::le(
            "small.limit",
            "two-sided norms converge to the limit map",
            gap,
            cfg.uniformity_tol,
            0.0,
        ));
    }
    Ok(SmallCaseReport {
        s,
        reduction_cutoff: red.cutoff,
        reduced_sup: red.residual_sup(),
        two_sided: two_g,
        one_sided: one_g,
        stages,
        checks,
        observations,
    })
}

fn small_stage(
    g: &UnimodularSamples,
    gc: &FourierCoeffs,
    eps: f64,
    s: f64,
    one_g: f64,
    cfg: &PipelineConfig,
) -> Result<(SmallStage, Vec<Check>)> {
    let (rho_gap, corr) = gate(g, eps, cfg)?;
    let mut stage = SmallStage {
        eps,
        rho_gap,
        gated: corr.is_some(),
        phi_sup: f64::NAN,
        phi_bmo: f64::NAN,
        positive: f64::NAN,
        dyadic: f64::NAN,
        dyadic_tails: f64::NAN,
        closed_form: f64::NAN,
        two_sided: f64::NAN,
        quadratic: f64::NAN,
        cubic: f64::NAN,
        t2: f64::NAN,
        t3: f64::NAN,
        e2: f64::NAN,
        j_limit: f64::NAN,
        c0_fit: f64::NAN,
        a_fit: f64::NAN,
        b_fit: f64::NAN,
        margin: f64::NAN,
        block_sup_over_bmo: f64::NAN,
    };
    let Some(corr) = corr else {
        return Ok((stage, Vec::new()));
    };
    let tag = eps_tag("small", eps);
    let n = g.len();
    let one = SobolevParams::one_sided(s)?;
    let two = SobolevParams::two_sided(s)?;
    let big = analyze_full(corr.big_h.samples());
    let chain = block_chain(&corr, gc, &tag)?;
    let phi_eps = corr.polar.phi.values();
    stage.phi_sup = corr.polar.phi.sup_norm();
    stage.phi_bmo = bmo_norm_real(phi_eps, &cfg.bmo)?;
    stage.positive = sobolev_spectral(&big, &one);
    stage.two_sided = sobolev_spectral(&big, &two);
    let w = |k: u32| 4f64.powf(k as f64 * s);
    stage.dyadic = chain.energies.iter().map(|(k, e, _)| w(*k) * e).sum();
    stage.dyadic_tails = chain.energies.iter().map(|(k, _, t)| 4.0 * w(*k) * t).sum();
    stage.closed_form = 4f64.powf(s + 1.0) / (1.0 - 4f64.powf(-s)) * one_g;
    stage.j_limit = big
        .iter()
        .map(|(k, a)| k.signum() as f64 * (k.unsigned_abs() as f64).powf(2.0 * s) * a.norm_sqr())
        .sum();

    // phase of H
    let log_rho: Vec<f64> = corr.polar.rho.iter().map(|r| r.ln()).collect();
    let conj = hilbert_real(&log_rho);
    let big_phi: Vec<f64> = phi_eps.iter().zip(&conj).map(|(p, q)| p + q).collect();
    let phi_c = analyze_full(&CircleSamples::from_real(&big_phi)?);
    let phi_bmo = bmo_norm_real(&big_phi, &cfg.bmo)?;
    let mut quadratic = 0.0;
    let mut cubic = 0.0;
    let mut cubic_block_checks: Vec<Check> = Vec::new();
    let mut cubic_delta_checks: Vec<Check> = Vec::new();
    let mut sup_ratio: f64 = 0.0;
    for (k, lo, hi) in blocks(phi_c.bandwidth()) {
        let b = block(&phi_c, lo, hi);
        let l2sq = b.energy();
        let samples = synthesize(&b, n)?;
        let cu: Vec<f64> = samples.values().iter().map(|z| z.norm().powi(3)).collect();
        let l3 = pairwise_sum(&cu) / n as f64;
        let sup = samples.sup_norm();
        quadratic += w(k) * l2sq;
        if k > 0 {
            cubic += w(k) * l3;
        }
        sup_ratio = sup_ratio.max(ratio_or_zero(sup, phi_bmo));
        cubic_block_checks.push(chained(
            format!("{tag}.cubic-block[k={k}]"),
            "cubic block norm below sup times quadratic",
            l3,
            sup * l2sq,
            1e-9,
        ));
        cubic_delta_checks.push(chained(
            format!("{tag}.cubic-delta0[k={k}]"),
            "cubic block norm below delta0 times quadratic",
            l3,
            cfg.delta0 * l2sq,
            1e-9,
        ));
    }
    let hv = corr.big_h.values();
    let kernel = move |tau: f64| tau.powf(-1.0 - 2.0 * s);
    let [t2, t3, e2] = shift_double_integrals(n, kernel, |i, j| {
        let d = (big_phi[i] - big_phi[j]).abs();
        [d * d, d * d * d, (hv[i] - hv[j]).norm_sqr()]
    });
    stage.quadratic = quadratic;
    stage.cubic = cubic;
    stage.t2 = t2;
    stage.t3 = t3;
    stage.e2 = e2;
    stage.c0_fit = ratio_or_zero(stage.j_limit.abs(), t3);
    stage.a_fit = ratio_or_zero(e2, stage.two_sided);
    stage.b_fit = ratio_or_zero(quadratic, t2);
    stage.margin = quadratic - stage.b_fit * (stage.c0_fit + 1.0) * cubic;
    stage.block_sup_over_bmo = sup_ratio;

    let winding = PhaseLift::of(corr.big_h.samples())?.winding();
    let mut checks = vec![
        Check::holds(
            format!("{tag}.degree"),
            "correction preserves degree zero",
            winding == 0,
        ),
        Check::lt(
            format!("{tag}.phase-sup"),
            "smoothed argument below delta0",
            stage.phi_sup,
            cfg.delta0,
        ),
        Check::lt(
            format!("{tag}.phase-bmo"),
            "smoothed argument BMO below delta0",
            stage.phi_bmo,
            cfg.delta0,
        ),
        Check::residual(
            format!("{tag}.block-identity"),
            "anti-analytic block identity",
            chain.identity_residual,
            cfg.identity_tol,
        ),
    ];
    checks.extend(chain.links.into_iter().flatten());
    checks.extend([
        chained(
            format!("{tag}.dyadic-majorant"),
            "one-sided sum below dyadic majorant",
            stage.positive,
            stage.dyadic,
            1e-12,
        ),
        chained(
            format!("{tag}.dyadic-tails"),
            "dyadic majorant below weighted tails",
            stage.dyadic,
            stage.dyadic_tails,
            1e-12,
        ),
        chained(
            format!("{tag}.closed-form"),
            "weighted tails below the geometric constant",
            stage.dyadic_tails,
            stage.closed_form,
            1e-12,
        ),
        chained(
            format!("{tag}.phase-integral"),
            "quadratic phase integral below map integral plus cubic",
            t2,
            e2 + t3,
            1e-9,
        ),
        Check::le(
            format!("{tag}.absorption"),
            "cubic term absorbed by the quadratic term",
            0.0,
            stage.margin,
            0.0,
        ),
    ]);
    checks.extend(worst(cubic_block_checks));
    checks.extend(worst(cubic_delta_checks));
    Ok((stage, checks))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VmoStage {
    pub eps: f64,
    pub rho_gap: Option<f64>,
    pub phi_bmo: f64,
    /// BMO of `φ_ε + H(log ρ_ε)`.
    pub corrected_bmo: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VmoReport {
    pub screen_tail: f64,
    pub screen_scale: f64,
    pub g_bmo: f64,
    pub lift_bmo: f64,
    pub min_slack: f64,
    pub stages: Vec<VmoStage>,
    pub small: SmallCaseReport,
    pub checks: Vec<Check>,
    pub observations: Vec<Observation>,
}

impl VmoReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass) && self.small.passed()
    }
}

/// Oscillation-scale levels used by the screen: the finest half-width keeps
/// about eight samples on each side of the center.
pub fn screen_scales(n: usize) -> Vec<f64> {
    let levels = (n.trailing_zeros().saturating_sub(4)).max(1);
    dyadic_scales(levels)
}

/// Screen `f` for vanishing mean oscillation at grid scale, reduce its
/// argument, check the oscillation bounds along the schedule and hand over
/// to [`verify_small_case`].
pub fn vmo_entry(f: &UnimodularSamples, s: f64, cfg: &PipelineConfig) -> Result<VmoReport> {
    cfg.validate()?;
    let n = f.len();
    let scales = screen_scales(n);
    let centers = cfg.bmo.centers.len().max(1);
    let profile = vmo_profile(f.samples(), &scales, centers)?;
    let limit = cfg.delta0 / 2.0;
    let screen_scale = *scales.last().expect("at least one scale");
    if !(profile.tail() < limit) {
        return Err(Error::NotVmo {
            osc: profile.tail(),
            scale: screen_scale,
            limit,
        });
    }
    let red = reduce_argument(f, cfg.delta0 / 4.0)?;
    let g = &red.g;
    let g_bmo = crate::norms::bmo_norm(g.samples(), &cfg.bmo)?;
    let lift_bmo = bmo_norm_real(&red.residual_phase, &cfg.bmo)?;
    let g_profile = vmo_profile(g.samples(), &scales, centers)?;

    let stages: Vec<Result<VmoStage>> = cfg
        .eps_schedule
        .par_iter()
        .map(|&eps| {
            let spec = SmootherSpec::new(cfg.family, eps)?;
            let h = smooth(g.samples(), &spec);
            match polar(&h, cfg.rho_floor) {
                Ok(p) => {
                    let phi_bmo = bmo_norm_real(p.phi.values(), &cfg.bmo)?;
                    let log_rho: Vec<f64> = p.rho.iter().map(|r| r.ln()).collect();
                    let corrected: Vec<f64> = p
                        .phi
                        .values()
                        .iter()
                        .zip(hilbert_real(&log_rho))
                        .map(|(a, b)| a + b)
                        .collect();
                    Ok(VmoStage {
                        eps,
                        rho_gap: Some(p.modulus_gap()),
                        phi_bmo,
                        corrected_bmo: bmo_norm_real(&corrected, &cfg.bmo)?,
                    })
                }
                Err(Error::ModulusCollapsed { .. }) => Ok(VmoStage {
                    eps,
                    rho_gap: None,
                    phi_bmo: f64::NAN,
                    corrected_bmo: f64::NAN,
                }),
                Err(e) => Err(e),
            }
        })
        .collect();
    let stages: Vec<VmoStage> = stages.into_iter().collect::<Result<_>>()?;

    let mut checks = vec![
        Check::lt(
            "vmo.screen",
            "oscillation at the finest scale below delta0/2",
            profile.tail(),
            limit,
        ),
        Check::lt(
            "vmo.map-bmo",
            "BMO of the reduced map below delta0",
            g_bmo,
            cfg.delta0,
        ),
        Check::lt(
            "vmo.argument-bmo",
            "BMO of the reduced argument below delta0",
            lift_bmo,
            cfg.delta0,
        ),
        Check::le(
            "vmo.windowwise",
            "window mean modulus deficit below mean oscillation",
            0.0,
            g_profile.min_slack,
            1e-12,
        ),
    ];
    for st in &stages {
        let tag = eps_tag("vmo", st.eps);
        checks.push(Check::holds(
            format!("{tag}.modulus"),
            "smoothed modulus stays above the floor",
            st.rho_gap.is_some(),
        ));
        if st.rho_gap.is_some() {
            checks.push(Check::lt(
                format!("{tag}.phase-bmo"),
                "smoothed argument BMO below delta0",
                st.phi_bmo,
                cfg.delta0,
            ));
            checks.push(Check::lt(
                format!("{tag}.corrected-bmo"),
                "corrected argument BMO below delta0",
                st.corrected_bmo,
                cfg.delta0,
            ));
        }
    }
    for w in stages.windows(2) {
        if let (Some(a), Some(b)) = (w[0].rho_gap, w[1].rho_gap) {
            checks.push(Check::le(
                format!("vmo.modulus-trend[eps={}]", w[1].eps),
                "modulus deficit decreases along the schedule",
                b,
                a,
                1e-12,
            ));
        }
    }
    let observations = stages
        .iter()
        .map(|st| {
            Observation::new(
                format!("{}.rho-gap", eps_tag("vmo", st.eps)),
                st.rho_gap.unwrap_or(f64::NAN),
            )
        })
        .collect();
    let small = verify_small_case(g, s, cfg)?;
    Ok(VmoReport {
        screen_tail: profile.tail(),
        screen_scale,
        g_bmo,
        lift_bmo,
        min_slack: g_profile.min_slack,
        stages,
        small,
        checks,
        observations,
    })
}

/// `|e^{iu} - e^{iv}| + |u - v|^{3/2} - |u - v|`, nonnegative for all real
/// `u, v`.
pub fn chord_margin(u: f64, v: f64) -> f64 {
    let d = (u - v).abs();
    2.0 * (0.5 * d).sin().abs() + d.powf(1.5) - d
}
