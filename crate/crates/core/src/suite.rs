//! Seeded verification suites and their aggregate report.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blaschke::{
    default_a_grid, default_conjugate_grid, default_k_grid, fits, r1_construct,
    scale_separated_bounds, scaling_sweep, BlaschkeSpec, BlaschkeStage, R1Outcome, SweepTable,
    DEFAULT_SWEEP_A, DEFAULT_SWEEP_K,
};
use crate::degree::{degree_both, degree_brezis, degree_winding, PhaseLift};
use crate::error::{Error, Result};
use crate::io::read_coeffs;
use crate::kernels::{angle_grid, jn_bound_check, kns_table, KernelSpec};
use crate::maps::{
    random_phase_maps, random_small_phases, random_zero_degree_maps, PhaseMap, TrigPhase,
};
use crate::norms::{
    projection_bound_check, sobolev_integral, sobolev_spectral, SobolevParams, WeightSeq,
};
use crate::pipeline::{verify_half_case, verify_small_case, vmo_entry, PipelineConfig};
use crate::report::{Check, Environment, Observation, VerificationReport};
use crate::spectrum::{analyze, analyze_full, UnimodularSamples};

/// Suites in execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteName {
    Degree,
    Half,
    Small,
    Vmo,
    Kernel,
    Sweep,
    R1,
    Theorem3,
}

impl SuiteName {
    pub const ALL: [SuiteName; 8] = [
        SuiteName::Degree,
        SuiteName::Half,
        SuiteName::Small,
        SuiteName::Vmo,
        SuiteName::Kernel,
        SuiteName::Sweep,
        SuiteName::R1,
        SuiteName::Theorem3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Degree => "degree",
            SuiteName::Half => "half",
            SuiteName::Small => "small",
            SuiteName::Vmo => "vmo",
            SuiteName::Kernel => "kernel",
            SuiteName::Sweep => "sweep",
            SuiteName::R1 => "r1",
            SuiteName::Theorem3 => "theorem3",
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown suite {s:?}")))
    }
}

/// Gating tolerances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub degree_residual: f64,
    pub identity: f64,
    pub bound_slack: f64,
    pub slope: f64,
    pub one_sided_range: f64,
    pub kernel_stability: f64,
    pub bracket_width: f64,
    pub symmetric_jn: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            degree_residual: 1e-6,
            identity: 1e-8,
            bound_slack: 0.01,
            slope: 0.05,
            one_sided_range: 2.0,
            kernel_stability: 0.15,
            bracket_width: 50.0,
            symmetric_jn: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub suites: Vec<SuiteName>,
    pub seed: u64,
    /// Grid for the degree suite.
    pub grid: usize,
    /// Bandwidth for the degree suite, `grid/2 - 1` when absent.
    pub bandwidth: Option<usize>,
    /// Grid for the pipeline suites.
    pub pipeline_grid: usize,
    /// Smoothness for the small and VMO cases.
    pub s: f64,
    /// Coefficient file checked by the degree suite.
    pub input: Option<PathBuf>,
    /// Worker count; falls back to `US_THREADS`, then to the rayon default.
    pub threads: Option<usize>,
    pub tolerances: Tolerances,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suites: SuiteName::ALL.to_vec(),
            seed: 0,
            grid: 4096,
            bandwidth: None,
            pipeline_grid: 1024,
            s: 0.25,
            input: None,
            threads: None,
            tolerances: Tolerances::default(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.suites.is_empty() {
            return Err(Error::invalid("select at least one suite"));
        }
        if self.grid < 4 || !self.grid.is_power_of_two() {
            return Err(Error::BadSampleCount(self.grid));
        }
        if self.pipeline_grid < 64 || !self.pipeline_grid.is_power_of_two() {
            return Err(Error::BadSampleCount(self.pipeline_grid));
        }
        if let Some(m) = self.bandwidth {
            if 2 * m + 2 > self.grid {
                return Err(Error::TooFewSamples {
                    bandwidth: m,
                    samples: self.grid,
                });
            }
        }
        if !(self.s > 0.0 && self.s < 1.0) {
            return Err(Error::invalid(format!(
                "smoothness {} outside (0, 1)",
                self.s
            )));
        }
        if self.threads == Some(0) {
            return Err(Error::invalid("thread count must be positive"));
        }
        Ok(())
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth.unwrap_or(self.grid / 2 - 1)
    }

    fn worker_count(&self) -> Option<usize> {
        self.threads.or_else(|| {
            std::env::var("US_THREADS")
                .ok()
                .and_then(|v| v.trim().parse().ok())
                .filter(|&n: &usize| n > 0)
        })
    }
}

/// Report plus the tables written alongside it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub report: VerificationReport,
    pub sweeps: Vec<(String, SweepTable)>,
    pub witness: Option<R1Outcome>,
}

#[derive(Default)]
struct Collector {
    checks: Vec<Check>,
    observations: Vec<Observation>,
    sweeps: Vec<(String, SweepTable)>,
    witness: Option<R1Outcome>,
}

impl Collector {
    fn prefixed(
        &mut self,
        prefix: &str,
        checks: impl IntoIterator<Item = Check>,
        obs: impl IntoIterator<Item = Observation>,
    ) {
        self.checks.extend(checks.into_iter().map(|mut c| {
            c.name = format!("{prefix}.{}", c.name);
            c
        }));
        self.observations.extend(obs.into_iter().map(|mut o| {
            o.name = format!("{prefix}.{}", o.name);
            o
        }));
    }

    fn observe(&mut self, name: impl Into<String>, value: f64) {
        self.observations.push(Observation::new(name, value));
    }
}

/// Runs the selected suites in their fixed order. Identical configurations
/// give identical reports for any worker count.
pub fn run_suite(cfg: &SuiteConfig) -> Result<VerificationReport> {
    run_suite_with_artifacts(cfg).map(|o| o.report)
}

pub fn run_suite_with_artifacts(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    cfg.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.worker_count() {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    pool.install(|| run_in_pool(cfg))
}

fn run_in_pool(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    let selected: BTreeSet<SuiteName> = cfg.suites.iter().copied().collect();
    let mut out = Collector::default();
    for suite in selected {
        match suite {
            SuiteName::Degree => degree_suite(cfg, &mut out)?,
            SuiteName::Half => half_suite(cfg, &mut out)?,
            SuiteName::Small => small_suite(cfg, &mut out)?,
            SuiteName::Vmo => vmo_suite(cfg, &mut out)?,
            SuiteName::Kernel => kernel_suite(cfg, &mut out)?,
            SuiteName::Sweep => sweep_suite(cfg, &mut out)?,
            SuiteName::R1 => r1_suite(&mut out)?,
            SuiteName::Theorem3 => projection_suite(cfg, &mut out)?,
        }
    }
    let mut report = VerificationReport::new(Environment {
        grid: cfg.grid,
        bandwidth: cfg.bandwidth(),
        seed: cfg.seed,
    });
    report.extend_checks(out.checks);
    report.extend_observations(out.observations);
    Ok(SuiteOutcome {
        report,
        sweeps: out.sweeps,
        witness: out.witness,
    })
}

const DEGREE_ANCHOR: &str = "spectral degree sum equals winding number";

fn degree_suite(cfg: &SuiteConfig, out: &mut Collector) -> Result<()> {
    let tol = cfg.tolerances.degree_residual;
    if let Some(path) = &cfg.input {
        let coeffs = read_coeffs(path)?;
        let grid = cfg
            .grid
            .max((2 * coeffs.bandwidth() + 2).next_power_of_two());
        let d = degree_both(&coeffs, grid)?;
        out.checks.push(Check::holds(
            "degree.input.agrees",
            DEGREE_ANCHOR,
            d.winding == Some(d.rounded),
        ));
        out.checks.push(Check::residual(
            "degree.input.residual",
            DEGREE_ANCHOR,
            d.residual,
            tol,
        ));
        out.observe("degree.input.spectral_sum", d.spectral_sum);
    }
    let maps = random_phase_maps(cfg.seed, 100, 5, 10, 2.0)?;
    let m = cfg.bandwidth();
    let results: Vec<(i64, i64, f64)> = maps
        .par_iter()
        .map(|map| {
            let f = map.samples(cfg.grid)?;
            let w = degree_winding(&f)?.0;
            let b = degree_brezis(&analyze(f.samples(), m)?);
            Ok((w, b.rounded, b.residual))
        })
        .collect::<Result<_>>()?;
    for (i, ((w, r, res), map)) in results.iter().zip(&maps).enumerate() {
        out.checks.push(Check::holds(
            format!("degree.map[{i}].agrees"),
            DEGREE_ANCHOR,
            w == r && *w == map.degree,
        ));
        out.checks.push(Check::residual(
            format!("degree.map[{i}].residual"),
            DEGREE_ANCHOR,
            *res,
            tol,
        ));
    }
    out.observe(
        "degree.max_residual",
        results.iter().map(|r| r.2).fold(0.0, f64::max),
    );
    Ok(())
}

fn pipeline_config(cfg: &SuiteConfig) -> PipelineConfig {
    PipelineConfig {
        bound_slack: cfg.tolerances.bound_slack,
        identity_tol: cfg.tolerances.identity,
        ..PipelineConfig::default()
    }
}

fn half_maps(seed: u64) -> Result<Vec<PhaseMap>> {
    random_zero_degree_maps(seed, 20, 6, 2.0)
}

fn half_suite(cfg: &SuiteConfig, out: &mut Collector) -> Result<()> {
    let pc = pipeline_config(cfg);
    for (i, map) in half_maps(cfg.seed)?.iter().enumerate() {
        let r = verify_half_case(&map.samples(cfg.pipeline_grid)?, &pc)?;
        out.prefixed(&format!("half[{i}]"), r.checks, r.observations);
    }
    Ok(())
}

fn small_inputs(cfg: &SuiteConfig) -> Result<Vec<(String, UnimodularSamples)>> {
    let n = cfg.pipeline_grid;
    let phase = |p: TrigPhase| UnimodularSamples::from_phase(&p.sample(n));
    let mut v = vec![
        (
            "small[sin]".to_string(),
            phase(TrigPhase {
                cos: vec![0.0],
                sin: vec![0.05],
            })?,
        ),
        (
            "small[zero]".to_string(),
            phase(TrigPhase {
                cos: vec![],
                sin: vec![],
            })?,
        ),
    ];
    for (i, m) in random_zero_degree_maps(cfg.seed ^ 0x5a, 4, 4, 1.0)?
        .into_iter()
        .enumerate()
    {
        v.push((format!("small[{i}]"), m.samples(n)?));
    }
    Ok(v)
}

fn small_suite(cfg: &SuiteConfig, out: &mut Collector) -> Result<()> {
    let pc = pipeline_config(cfg);
    for (name, f) in small_inputs(cfg)? {
        let r = verify_small_case(&f, cfg.s, &pc)?;
        out.prefixed(&name, r.checks, r.observations);
    }
    Ok(())
}

fn vmo_suite(cfg: &SuiteConfig, out: &mut Collector) -> Result<()> {
    let pc = pipeline_config(cfg);
    let n = cfg.pipeline_grid;
    let bump = |t: f64| 0.8 * t.sin() + 0.2 * t.sin().abs().powf(1.5);
    let phase: Vec<f64> = (0..n)
        .map(|j| bump(std::f64::consts::TAU * j as f64 / n as f64))
        .collect();
    let mut inputs = vec![(
        "vmo[bump]".to_string(),
        UnimodularSamples::from_phase(&phase)?,
    )];
    // |φ'| ≤ 1.5 keeps the finest-scale oscillation below the screen
    for (i, m) in random_zero_degree_maps(cfg.seed ^ 0xa5, 3, 3, 0.5)?
        .into_iter()
        .enumerate()
    {
        inputs.push((format!("vmo[{i}]"), m.samples(n)?));
    }
    for (name, f) in inputs {
        let r = vmo_entry(&f, cfg.s, &pc)?;
        out.prefixed(&name, r.checks, r.observations);
        out.prefixed(
            &format!("{name}.small"),
            r.small.checks,
            r.small.observations,
        );
    }
    // two arcs: the oscillation does not vanish with the scale
    let jump: Vec<f64> = (0..n).map(|j| if j < n / 2 { 0.0 } else { 1.0 }).collect();
    let screened = vmo_entry(&UnimodularSamples::from_phase(&jump)?, cfg.s, &pc);
    out.checks.push(Check::holds(
        "vmo[jump].screen_rejects",
        "vanishing mean oscillation screen",
        matches!(screened, Err(Error::NotVmo { .. })),
    ));
    Ok(())
}

const KERNEL_SIZES: [u64; 3] = [64, 128, 256];
const KERNEL_S: [f64; 3] = [0.25, 0.5, 0.75];

fn kernel_suite(cfg: &SuiteConfig, out: &mut Collector) -> Result<()> {
    let tol = &cfg.tolerances;
    let anchor = "kernel decay |K(t)| <= c N min(1, (N|t|)^(-1-2s))";
    for s in KERNEL_S {
        let mut fitted = Vec::new();
        for n in KERNEL_SIZES {
            let spec = KernelSpec::new(n, s)?;
            let table = kns_table(&spec, &angle_grid(32 * n as usize))?;
            let name = format!("kernel[N={n},s={s}]");
            out.checks.push(Check::holds(
                format!("{name}.finite"),
                anchor,
                table.fitted_c.is_finite(),
            ));
            out.checks.push(Check::holds(
                format!("{name}.bounded"),
                anchor,
                table.bounded_by(table.fitted_c),
            ));
            out.observe(format!("{name}.fitted_c"), table.fitted_c);
            fitted.push(table.fitted_c);
        }
        for (w, n) in fitted.windows(2).zip(KERNEL_SIZES) {
            out.checks.push(Check::le(
                format!("kernel[N={n}->{},s={s}].stability", 2 * n),
                anchor,
                (w[1] / w[0] - 1.0).abs(),
                tol.kernel_stability,
                0.0,
            ));
        }
    }

    // integral and truncated spectral forms of the seminorm
    let maps = random_phase_maps(cfg.seed ^ 0x46, 10, 5, 10, 2.0)?;
    let samples: Vec<_> = maps
        .iter()
        .map(|m| m.samples(1024))
        .collect::<Result<_>>()?;
    let spectra: Vec<_> = samples.iter().map(|f| analyze_full(f.samples())).collect();
    for s in KERNEL_S {
        let mut ratios = Vec::new();
        for (f, c) in samples.iter().zip(&spectra) {
            for n in [16u64, 32, 64] {
                let p = SobolevParams::two_sided(s)?.truncated(n);
                ratios.push(sobolev_integral(f.samples(), s, n as f64)? / sobolev_spectral(c, &p));
            }
        }
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().copied().fold(0.0, f64::max);
        let name = format!("equivalence[s={s}]");
        out.checks.push(Check::lt(
            format!("{name}.positive"),
            "integral and truncated spectral forms equivalent",
            0.0,
            lo,
        ));
        out.checks.push(Check::le(
            format!("{name}.bracket"),
            "integral and truncated spectral forms equivalent",
            hi / lo,
            tol.bracket_width,
            0.0,
        ));
        out.observe(format!("{name}.lo"), lo);
        out.observe(format!("{name}.hi"), hi);
    }

    // J vanishes when |a_n| = |a_{-n}|
    let n = 256;
    let phase: Vec<f64> = (0..n)
        .map(|j| 0.3 * (std::f64::consts::TAU * j as f64 / n as f64).sin())
        .collect();
    let r = jn_bound_check(&PhaseLift::from_values(phase, 0), &KernelSpec::new(8, 0.5)?)?;
    let anchor = "J_N vanishes on coefficient-symmetric maps";
    out.checks.push(Check::residual(
        "jn[symmetric].spectral",
        anchor,
        r.j_spectral.abs(),
        tol.symmetric_jn,
    ));
    out.checks.push(Check::residual(
        "jn[symmetric].integral",
        anchor,
        r.j_integral.abs(),
        tol.symmetric_jn,
    ));
    Ok(())
}

fn sweep_suite(cfg: &SuiteConfig, out: &mut Collector) -> Result<()> {
    let tol = &cfg.tolerances;
    let tables = [
        (
            "a",
            scaling_sweep(0.25, &default_a_grid(), &[DEFAULT_SWEEP_K], false)?,
            fits::SECOND_TERM_VS_GAP,
        ),
        (
            "k",
            scaling_sweep(0.25, &[DEFAULT_SWEEP_A], &default_k_grid(), false)?,
            fits::TWO_SIDED_VS_K,
        ),
        (
            "conjugate",
            scaling_sweep(0.75, &default_conjugate_grid(), &[1], true)?,
            fits::TWO_SIDED_VS_INVERSE_GAP,
        ),
    ];
    let anchor = "counterexample family scaling exponent";
    for (label, t, fit) in &tables {
        let f = t
            .fit(fit)
            .ok_or_else(|| Error::invalid(format!("sweep {label} produced no {fit} fit")))?;
        let target = f.target.unwrap_or(f64::NAN);
        out.checks.push(Check::le(
            format!("sweep[{label}].{fit}"),
            anchor,
            (f.slope - target).abs(),
            tol.slope,
            0.0,
        ));
        out.observe(format!("sweep[{label}].slope"), f.slope);
        out.observe(format!("sweep[{label}].fit_residual"), f.residual);
        for other in t.fits.iter().filter(|g| g.name != *fit) {
            out.observe(format!("sweep[{label}].{}", other.name), other.slope);
        }
    }
    let conj = &tables[2].1;
    out.checks.push(Check::le(
        "sweep[conjugate].one_sided_range",
        "one-sided sum bounded along the conjugated family",
        conj.one_sided_range,
        tol.one_sided_range,
        0.0,
    ));
    out.sweeps = tables
        .into_iter()
        .map(|(l, t, _)| (l.to_string(), t))
        .collect();
    Ok(())
}

fn r1_suite(out: &mut Collector) -> Result<()> {
    let anchor = "weighted Taylor norms of Blaschke products grow without bound";
    let w = r1_construct(&WeightSeq::Log, 5, 2.0)?;
    out.checks
        .push(Check::holds("r1[log].complete", anchor, w.complete));
    out.checks.push(Check::holds(
        "r1[log].divisibility",
        anchor,
        w.spec.divisibility_holds(),
    ));
    for (k, pair) in w.stages.windows(2).enumerate() {
        let name = format!("r1[log].stage[{}]", k + 2);
        out.checks.push(Check::le(
            format!("{name}.growth"),
            anchor,
            w.target_growth * pair[0].upper,
            pair[1].lower,
            0.0,
        ));
        out.checks.push(Check::lt(
            format!("{name}.increasing"),
            anchor,
            pair[0].upper,
            pair[1].lower,
        ));
    }
    for st in &w.stages {
        out.observe(
            format!("r1[log].log2_nu[{}]", st.nu.bits().saturating_sub(1)),
            st.log2_nu as f64,
        );
    }
    let unit = r1_construct(&WeightSeq::Unit, 5, 2.0)?;
    out.checks.push(Check::holds(
        "r1[unit].infeasible",
        "bounded weights cap the norm by Parseval",
        !unit.complete
            && unit
                .diagnostic
                .as_deref()
                .is_some_and(|d| d.contains("Parseval")),
    ));

    // bounds against boundary sampling on a small scale-separated product
    let stages = [(0.5, 0u32), (0.5, 6), (0.5, 12)];
    let spec = BlaschkeSpec::new(
        stages
            .iter()
            .map(|&(r, e)| BlaschkeStage {
                zeros: vec![num_complex::Complex64::new(r, 0.0)],
                nu: BigUint::from(1u32) << e,
            })
            .collect(),
    )?;
    for k in 1..=stages.len() {
        let (lo, up) = scale_separated_bounds(&stages[..k], &WeightSeq::Log)
            .ok_or_else(|| Error::invalid("cross-check stages are not scale separated"))?;
        let exact = spec.sampled_weighted_norm(k, &WeightSeq::Log, 1 << 18)?;
        let name = format!("r1[cross][{k}]");
        out.checks.push(Check::le(
            format!("{name}.lower"),
            "certified bounds bracket sampled norm",
            lo,
            exact,
            1e-12 * exact,
        ));
        out.checks.push(Check::le(
            format!("{name}.upper"),
            "certified bounds bracket sampled norm",
            exact,
            up,
            1e-12 * exact,
        ));
    }
    out.witness = Some(w);
    Ok(())
}

pub const PROJECTION_SMOOTHNESS: [f64; 3] = [0.9, 1.2, 1.5];

fn projection_suite(cfg: &SuiteConfig, out: &mut Collector) -> Result<()> {
    for (si, s) in PROJECTION_SMOOTHNESS.into_iter().enumerate() {
        let phases = random_small_phases(cfg.seed ^ (0x73 + si as u64), 20, 6, s, 0.01, 0.095)?;
        for (i, p) in phases.iter().enumerate() {
            let r = projection_bound_check(&p.sample(256), s)?;
            let name = format!("theorem3[s={s}][{i}]");
            out.checks.push(Check::le(
                format!("{name}.projection"),
                "|f| <= 3 |Pf| for small smooth phase",
                r.f_norm,
                3.0 * r.pf_norm,
                1e-15,
            ));
            out.checks.push(Check::le(
                format!("{name}.remainder"),
                "|e^(i phi) - 1 - i phi| <= delta |phi|",
                r.h_norm,
                r.delta * r.phi_norm,
                1e-15,
            ));
            out.observe(format!("{name}.ratio"), r.ratio);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_parse_and_order() {
        for n in SuiteName::ALL {
            assert_eq!(n.as_str().parse::<SuiteName>().unwrap(), n);
        }
        assert!("bogus".parse::<SuiteName>().is_err());
        let mut v = vec![SuiteName::Theorem3, SuiteName::Degree, SuiteName::R1];
        v.sort();
        assert_eq!(v, [SuiteName::Degree, SuiteName::R1, SuiteName::Theorem3]);
    }

    #[test]
    fn config_validation() {
        assert!(SuiteConfig::default().validate().is_ok());
        assert!(SuiteConfig {
            suites: vec![],
            ..SuiteConfig::default()
        }
        .validate()
        .is_err());
        assert!(SuiteConfig {
            grid: 100,
            ..SuiteConfig::default()
        }
        .validate()
        .is_err());
        assert!(SuiteConfig {
            threads: Some(0),
            ..SuiteConfig::default()
        }
        .validate()
        .is_err());
        let cfg: SuiteConfig =
            serde_json::from_str(r#"{"suites": ["degree"], "seed": 3}"#).unwrap();
        assert_eq!(cfg.grid, 4096);
        assert_eq!(cfg.suites, [SuiteName::Degree]);
    }

    #[test]
    fn degree_suite_passes() {
        let cfg = SuiteConfig {
            suites: vec![SuiteName::Degree],
            ..SuiteConfig::default()
        };
        let r = run_suite(&cfg).unwrap();
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.summary.total, 200);
    }

    #[test]
    fn missing_input_is_an_error() {
        let cfg = SuiteConfig {
            suites: vec![SuiteName::Degree],
            input: Some(PathBuf::from("/nonexistent/coeffs.csv")),
            ..SuiteConfig::default()
        };
        assert!(matches!(run_suite(&cfg), Err(Error::Io(_))));
    }
}
