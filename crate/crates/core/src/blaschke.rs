//! Finite Blaschke products, dilation `B(z) ↦ B(z^ν)`, the greedy
//! construction of products whose weighted Taylor norms grow without bound,
//! and the Möbius counterexample family with its scaling sweeps.

use num_bigint::BigUint;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{sobolev_spectral, weighted_norm, SobolevParams, WeightSeq};
use crate::spectrum::{analyze, analyze_full, CircleSamples, FourierCoeffs};

/// Zeros are rejected at or beyond this radius.
pub const MAX_RADIUS: f64 = 1.0 - 1e-6;

/// Largest sampling grid used to extract Taylor coefficients.
const MAX_GRID: usize = 1 << 22;

/// `(α - z) / (1 - ᾱ z)`.
#[inline]
pub fn factor(alpha: Complex64, z: Complex64) -> Complex64 {
    (alpha - z) / (1.0 - alpha.conj() * z)
}

pub fn product(zeros: &[Complex64], z: Complex64) -> Complex64 {
    zeros.iter().map(|&a| factor(a, z)).product()
}

fn check_zeros(zeros: &[Complex64]) -> Result<f64> {
    let mut r: f64 = 0.0;
    for a in zeros {
        if !(a.norm() < MAX_RADIUS) {
            return Err(Error::ZeroNearBoundary(format!("{a}")));
        }
        r = r.max(a.norm());
    }
    Ok(r)
}

/// Taylor coefficients of `Π (α_j - z)/(1 - ᾱ_j z)` on `[-M, M]`, extracted
/// from boundary samples on a grid fine enough that aliasing is below
/// double precision.
pub fn blaschke_coeffs(zeros: &[Complex64], bandwidth: usize) -> Result<FourierCoeffs> {
    let r = check_zeros(zeros)?;
    let d = zeros.len().max(1) as f64;
    let mut n = (2 * bandwidth + 2).next_power_of_two().max(64);
    // coefficients decay like n^{d-1} r^n
    let enough =
        |n: usize| r == 0.0 || ((n - bandwidth) as f64) * -r.ln() > 40.0 + d * (n as f64).ln();
    while !enough(n) {
        n *= 2;
        if n > MAX_GRID {
            return Err(Error::ZeroNearBoundary(format!(
                "radius {r} needs more than {MAX_GRID} samples for bandwidth {bandwidth}"
            )));
        }
    }
    let samples = CircleSamples::from_fn(n, |t| product(zeros, Complex64::from_polar(1.0, t)))?;
    analyze(&samples, bandwidth)
}

/// `a_n ↦` coefficient at `nν`, on output bandwidth `capacity`.
pub fn dilate(coeffs: &FourierCoeffs, nu: u64, capacity: usize) -> Result<FourierCoeffs> {
    if nu == 0 {
        return Err(Error::invalid("dilation must be positive"));
    }
    let m = coeffs.bandwidth();
    if (m as u128) * (nu as u128) > capacity as u128 {
        return Err(Error::Capacity {
            nu,
            bandwidth: m,
            capacity,
        });
    }
    let mut out = FourierCoeffs::zeros(capacity);
    for (n, a) in coeffs.iter() {
        out.set(n * nu as i64, a);
    }
    Ok(out)
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        BigUint::parse_bytes(text.as_bytes(), 10)
            .ok_or_else(|| D::Error::custom(format!("bad integer {text:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeStage {
    pub zeros: Vec<Complex64>,
    /// Dilation, written in decimal.
    #[serde(with = "decimal")]
    pub nu: BigUint,
}

/// `B(z) = Π B_j(z^{ν_j})` with `ν_j | ν_{j+1}`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeSpec {
    pub stages: Vec<BlaschkeStage>,
}

impl BlaschkeSpec {
    pub fn new(stages: Vec<BlaschkeStage>) -> Result<Self> {
        let spec = Self { stages };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for (j, st) in self.stages.iter().enumerate() {
            check_zeros(&st.zeros)?;
            if st.nu == BigUint::from(0u32) {
                return Err(Error::invalid(format!(
                    "stage {j}: dilation must be positive"
                )));
            }
        }
        if !self.divisibility_holds() {
            return Err(Error::invalid("dilations must form a divisibility chain"));
        }
        Ok(())
    }

    /// `ν_j` divides `ν_{j+1}` for every consecutive pair.
    pub fn divisibility_holds(&self) -> bool {
        self.stages
            .windows(2)
            .all(|w| (&w[1].nu % &w[0].nu) == BigUint::from(0u32))
    }

    /// Samples of the partial product over the first `upto` stages on an
    /// `n`-point grid; `e^{iν t_j}` is evaluated through `ν j mod n`.
    pub fn boundary_samples(&self, upto: usize, n: usize) -> Result<CircleSamples> {
        let big_n = BigUint::from(n);
        let residues: Vec<u64> = self.stages[..upto.min(self.stages.len())]
            .iter()
            .map(|st| {
                (&st.nu % &big_n)
                    .to_u64_digits()
                    .first()
                    .copied()
                    .unwrap_or(0)
            })
            .collect();
        CircleSamples::new(
            (0..n)
                .into_par_iter()
                .map(|j| {
                    self.stages
                        .iter()
                        .zip(&residues)
                        .map(|(st, &nu)| {
                            let idx = (nu as u128 * j as u128 % n as u128) as f64;
                            let z =
                                Complex64::from_polar(1.0, std::f64::consts::TAU * idx / n as f64);
                            product(&st.zeros, z)
                        })
                        .product()
                })
                .collect(),
        )
    }

    /// `‖C_upto‖_ω` from boundary samples. Exact up to aliasing when the
    /// coefficients beyond `n/2` are negligible.
    pub fn sampled_weighted_norm(&self, upto: usize, w: &WeightSeq, n: usize) -> Result<f64> {
        weighted_norm(&analyze_full(&self.boundary_samples(upto, n)?), w)
    }
}

/// Candidate zero radii for each stage.
pub const R1_RADII: [f64; 5] = [0.5, 0.7, 0.9, 0.95, 0.99];

/// Largest admissible `log₂ ν`.
pub const R1_MAX_LOG2: u32 = 1 << 14;

/// Coefficient mass below which a factor's Taylor series is truncated.
const LAW_TAIL: f64 = 1e-20;

/// `|b_m|²` for the single-zero factor `(r - z)/(1 - r z)`.
#[derive(Clone, Debug)]
struct StageLaw {
    p: Vec<f64>,
    mass: f64,
    /// Mean digit under the normalized law.
    mean: f64,
}

impl StageLaw {
    fn new(radius: f64) -> Self {
        let r2 = radius * radius;
        // tail beyond M is (1 - r²) r^{2M}
        let m_max = ((LAW_TAIL / (1.0 - r2)).ln() / (2.0 * radius.ln()))
            .ceil()
            .max(1.0) as usize;
        let mut p = Vec::with_capacity(m_max + 1);
        p.push(r2);
        let mut t = (1.0 - r2) * (1.0 - r2);
        for _ in 1..=m_max {
            p.push(t);
            t *= r2;
        }
        let mass: f64 = p.iter().sum();
        let mean = p.iter().enumerate().map(|(m, q)| m as f64 * q).sum::<f64>() / mass;
        Self { p, mass, mean }
    }

    fn m_max(&self) -> u64 {
        (self.p.len() - 1) as u64
    }
}

#[derive(Clone, Debug)]
struct Placed {
    law: StageLaw,
    log2_nu: u32,
}

fn max_index(placed: &[Placed]) -> BigUint {
    placed
        .iter()
        .map(|p| BigUint::from(p.law.m_max()) << p.log2_nu)
        .sum()
}

/// Lower and upper bounds on `‖C‖²_ω` for a scale-separated product.
///
/// With `ν_{j+1}` beyond the largest retained index of the partial product,
/// every retained coefficient index has a unique digit expansion
/// `n = Σ m_j ν_j`, so `|c_n|² = Π p_j(m_j)`. Mass is split by the top stage
/// `j` and its digit `m ≥ 1`; on that class `mν_j ≤ n ≤ mν_j + x`, with `x`
/// the contribution of the lower stages.
fn separated_bounds(placed: &[Placed], w: &WeightSeq) -> Option<(f64, f64)> {
    let k = placed.len();
    let p0: Vec<f64> = placed.iter().map(|p| p.law.p[0]).collect();
    let zero = w.at(0)?;
    let all_zero: f64 = p0.iter().product();
    let (mut lower, mut upper) = (zero * all_zero, zero * all_zero);
    let mut below_mass = 1.0;
    for j in 0..k {
        let above: f64 = p0[j + 1..].iter().product();
        let st = &placed[j];
        // ln E[x] for the lower stages
        let ln_excess = (0..j)
            .map(|i| placed[i].law.mean.ln() + placed[i].log2_nu as f64 * std::f64::consts::LN_2)
            .fold(f64::NEG_INFINITY, |acc, v| {
                let hi = acc.max(v);
                if hi == f64::NEG_INFINITY {
                    hi
                } else {
                    hi + ((acc - hi).exp() + (v - hi).exp()).ln()
                }
            });
        let span_below = max_index(&placed[..j]);
        for (m, &q) in st.law.p.iter().enumerate().skip(1) {
            let prob = q * above * below_mass;
            let lo = w.at_scaled(m as u64, st.log2_nu)?;
            let up = match w {
                WeightSeq::Unit => 1.0,
                // concavity of ln(n + 2)
                WeightSeq::Log => lo + (ln_excess - lo).exp().ln_1p(),
                WeightSeq::Table(_) => {
                    let top = (BigUint::from(m as u64) << st.log2_nu) + &span_below;
                    let idx = *top.to_u64_digits().first().unwrap_or(&0);
                    if top.bits() > 63 {
                        return None;
                    }
                    w.at(idx)?
                }
            };
            lower += prob * lo;
            upper += prob * up;
        }
        below_mass *= st.law.mass;
    }
    Some((lower, upper))
}

/// Certified bounds on `‖C‖_ω` for single-zero stages `(radius, log₂ ν)`,
/// or `None` when the stages are not scale separated or the weight is
/// undefined on the support.
pub fn scale_separated_bounds(stages: &[(f64, u32)], w: &WeightSeq) -> Option<(f64, f64)> {
    let placed: Vec<Placed> = stages
        .iter()
        .map(|&(r, e)| Placed {
            law: StageLaw::new(r),
            log2_nu: e,
        })
        .collect();
    for k in 1..placed.len() {
        if placed[k].log2_nu < max_index(&placed[..k]).bits() as u32 {
            return None;
        }
    }
    separated_bounds(&placed, w).map(squared_bounds_to_norms)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct R1Stage {
    pub radius: f64,
    #[serde(with = "decimal")]
    pub nu: BigUint,
    pub log2_nu: u32,
    /// Certified bounds on `‖C_k‖_ω`.
    pub lower: f64,
    pub upper: f64,
    /// `lower_k / upper_{k-1}`.
    pub growth: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct R1Outcome {
    pub spec: BlaschkeSpec,
    pub stages: Vec<R1Stage>,
    pub target_growth: f64,
    pub requested_stages: usize,
    pub complete: bool,
    pub diagnostic: Option<String>,
}

impl R1Outcome {
    /// `lower_k ≥ growth · upper_{k-1}` for every recorded stage.
    pub fn trace_certified(&self) -> bool {
        self.stages
            .windows(2)
            .all(|w| w[1].lower >= self.target_growth * w[0].upper && w[1].lower > w[0].upper)
    }
}

fn squared_bounds_to_norms((lo, up): (f64, f64)) -> (f64, f64) {
    (lo.max(0.0).sqrt(), up.max(0.0).sqrt())
}

/// Greedy construction of `C_k = Π_{j≤k} B_j(z^{ν_j})` with single-zero
/// factors and `ν_j = 2^{e_j}`, choosing per stage the radius and the
/// smallest exponent such that `‖C_k‖_ω ≥ growth · ‖C_{k-1}‖_ω` is
/// certified by [`separated_bounds`].
pub fn r1_construct(w: &WeightSeq, stages: usize, growth: f64) -> Result<R1Outcome> {
    if stages == 0 {
        return Err(Error::invalid("at least one stage is required"));
    }
    if !(growth > 1.0 && growth.is_finite()) {
        return Err(Error::invalid(format!(
            "growth factor {growth} must exceed 1"
        )));
    }
    if !w.is_nondecreasing() {
        return Err(Error::precondition(
            "weight must be nondecreasing on its prefix",
        ));
    }
    let first = Placed {
        law: StageLaw::new(R1_RADII[0]),
        log2_nu: 0,
    };
    let mut placed = vec![first];
    let (lo, up) = squared_bounds_to_norms(
        separated_bounds(&placed, w)
            .ok_or_else(|| Error::invalid("weight table too short for the first stage"))?,
    );
    let mut trace = vec![R1Stage {
        radius: R1_RADII[0],
        nu: BigUint::from(1u32),
        log2_nu: 0,
        lower: lo,
        upper: up,
        growth: None,
    }];
    let mut diagnostic = None;
    while trace.len() < stages {
        let prev_upper = trace.last().expect("nonempty").upper;
        let target = growth * prev_upper;
        if let Some(sup) = w.supremum() {
            if target > sup.sqrt() {
                diagnostic = Some(format!(
                    "stage {}: weighted norm is capped at sqrt(sup ω) = {:.6} by Parseval, below the target {target:.6}; the weight must tend to infinity",
                    trace.len() + 1,
                    sup.sqrt()
                ));
                break;
            }
        }
        let e_min = max_index(&placed).bits() as u32;
        let best = R1_RADII
            .par_iter()
            .filter_map(|&r| {
                let law = StageLaw::new(r);
                smallest_exponent(&placed, &law, e_min, w, target).map(|(e, b)| (r, law, e, b))
            })
            .collect::<Vec<_>>()
            .into_iter()
            .min_by_key(|(_, _, e, _)| *e);
        let Some((r, law, e, b)) = best else {
            diagnostic = Some(format!(
                "stage {}: no radius in {R1_RADII:?} reaches {target:.6} with ν ≤ 2^{R1_MAX_LOG2}; the weight grows too slowly for the candidate set",
                trace.len() + 1
            ));
            break;
        };
        placed.push(Placed { law, log2_nu: e });
        let (lo, up) = squared_bounds_to_norms(b);
        trace.push(R1Stage {
            radius: r,
            nu: BigUint::from(1u32) << e,
            log2_nu: e,
            lower: lo,
            upper: up,
            growth: Some(lo / prev_upper),
        });
    }
    let spec = BlaschkeSpec::new(
        trace
            .iter()
            .map(|st| BlaschkeStage {
                zeros: vec![Complex64::new(st.radius, 0.0)],
                nu: st.nu.clone(),
            })
            .collect(),
    )?;
    Ok(R1Outcome {
        spec,
        complete: trace.len() == stages,
        stages: trace,
        target_growth: growth,
        requested_stages: stages,
        diagnostic,
    })
}

/// Smallest `e ≥ e_min` whose certified lower bound reaches `target`.
fn smallest_exponent(
    placed: &[Placed],
    law: &StageLaw,
    e_min: u32,
    w: &WeightSeq,
    target: f64,
) -> Option<(u32, (f64, f64))> {
    let eval = |e: u32| {
        let mut trial = placed.to_vec();
        trial.push(Placed {
            law: law.clone(),
            log2_nu: e,
        });
        separated_bounds(&trial, w)
    };
    let ok = |b: Option<(f64, f64)>| b.is_some_and(|(lo, _)| lo.max(0.0).sqrt() >= target);
    if let WeightSeq::Table(_) = w {
        return (e_min..=R1_MAX_LOG2.min(62))
            .map(|e| (e, eval(e)))
            .find(|(_, b)| ok(*b))
            .map(|(e, b)| (e, b.expect("certified")));
    }
    // the lower bound is nondecreasing in e
    let mut fail = None;
    let mut step = 1u32;
    let mut e = e_min;
    let pass = loop {
        if e > R1_MAX_LOG2 {
            return None;
        }
        if ok(eval(e)) {
            break e;
        }
        fail = Some(e);
        e = e_min + step;
        step *= 2;
    };
    let (mut lo, mut hi) = (fail.map_or(pass, |f| f + 1), pass);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if ok(eval(mid)) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    eval(hi).map(|b| (hi, b))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoebiusParams {
    pub a: f64,
    pub k: u64,
}

impl MoebiusParams {
    pub fn new(a: f64, k: u64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::invalid(format!("a = {a} outside (0, 1)")));
        }
        if k == 0 {
            return Err(Error::invalid("k must be positive"));
        }
        Ok(Self { a, k })
    }

    /// Bandwidth that satisfies the tail requirement and keeps the dropped
    /// coefficient energy below `1e-30`.
    pub fn default_bandwidth(&self) -> usize {
        let base = (4.0 * self.k as f64 / (1.0 - self.a)).ceil();
        let terms = (-35.0 * std::f64::consts::LN_10 / (2.0 * self.a.ln())).ceil();
        base.max(self.k as f64 * terms) as usize
    }
}

/// Coefficients of `e^{-ikt} (a - e^{ikt}) / (1 - a e^{ikt})`: `a` at `-k`
/// and `-(1-a²) a^j` at `jk`, `j ≥ 0`.
pub fn moebius_family(p: MoebiusParams, bandwidth: usize) -> Result<FourierCoeffs> {
    let (a, k) = (p.a, p.k as i64);
    if (4.0 * p.k as f64 / (1.0 - a)) > bandwidth as f64 {
        return Err(Error::invalid(format!(
            "bandwidth {bandwidth} below 4k/(1-a) = {:.1}",
            4.0 * p.k as f64 / (1.0 - a)
        )));
    }
    let mut c = FourierCoeffs::zeros(bandwidth);
    c.set(-k, Complex64::new(a, 0.0));
    let mut coef = -(1.0 - a * a);
    let mut n = 0;
    while n <= bandwidth as i64 {
        c.set(n, Complex64::new(coef, 0.0));
        coef *= a;
        n += k;
    }
    Ok(c)
}

/// `-(1-a²) Σ_{j≥-1} a^j e^{ijkt}`: the family without its leading
/// `a^{-1} e^{-ikt}` term.
pub fn moebius_second_term(p: MoebiusParams, bandwidth: usize) -> Result<FourierCoeffs> {
    let mut c = moebius_family(p, bandwidth)?;
    c.set(-(p.k as i64), Complex64::new(-(1.0 - p.a * p.a) / p.a, 0.0));
    Ok(c)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub a: f64,
    pub k: u64,
    /// `Σ_{n≥0} n^{2s} |c_n|²`.
    pub one_sided: f64,
    /// `Σ |n|^{2s} |c_n|²`.
    pub two_sided: f64,
    /// `(Σ |n|^{2s} |d_n|²)^{1/2}` for the second term `d`.
    pub second_term: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub name: String,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
    /// Exponent the fit is compared against, if any.
    pub target: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub s: f64,
    pub conjugate: bool,
    pub rows: Vec<SweepRow>,
    pub fits: Vec<SlopeFit>,
    /// `max / min` of the one-sided sum over the rows.
    pub one_sided_range: f64,
}

impl SweepTable {
    pub fn fit(&self, name: &str) -> Option<&SlopeFit> {
        self.fits.iter().find(|f| f.name == name)
    }
}

/// Least-squares line through `(ln x, ln y)`.
pub fn log_log_fit(name: &str, x: &[f64], y: &[f64], target: Option<f64>) -> Result<SlopeFit> {
    if x.len() != y.len() || x.len() < 3 {
        return Err(Error::invalid("a slope fit needs at least three points"));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(Error::invalid("log-log fit needs positive data"));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (lx
        .iter()
        .zip(&ly)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(SlopeFit {
        name: name.to_string(),
        slope,
        intercept,
        residual,
        target,
    })
}

/// Fit names produced by [`scaling_sweep`].
pub mod fits {
    pub const SECOND_TERM_VS_GAP: &str = "second-term-vs-gap";
    pub const ANALYTIC_VS_GAP: &str = "analytic-one-sided-vs-gap";
    pub const TWO_SIDED_VS_K: &str = "two-sided-vs-k";
    pub const TWO_SIDED_VS_INVERSE_GAP: &str = "two-sided-vs-inverse-gap";
}

/// Sobolev sums of the family (or its conjugate) over a grid in `a` or in
/// `k`, with log-log exponent fits along the swept parameter.
///
/// Fits are omitted at `s = 1/2`, where the exponents degenerate.
pub fn scaling_sweep(
    s: f64,
    a_grid: &[f64],
    k_grid: &[u64],
    conjugate: bool,
) -> Result<SweepTable> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::invalid(format!("smoothness {s} outside (0, 1)")));
    }
    let sweep_a = a_grid.len() > 1;
    let sweep_k = k_grid.len() > 1;
    if sweep_a && sweep_k {
        return Err(Error::invalid("sweep one parameter at a time"));
    }
    let swept = if sweep_a { a_grid.len() } else { k_grid.len() };
    if swept < 3 {
        return Err(Error::invalid(format!(
            "degenerate grid: {swept} points, need at least 3"
        )));
    }
    let cells: Vec<(f64, u64)> = a_grid
        .iter()
        .flat_map(|&a| k_grid.iter().map(move |&k| (a, k)))
        .collect();
    let one = SobolevParams::one_sided(s)?;
    let two = SobolevParams::two_sided(s)?;
    let rows: Vec<SweepRow> = cells
        .par_iter()
        .map(|&(a, k)| {
            let p = MoebiusParams::new(a, k)?;
            let m = p.default_bandwidth();
            let mut c = moebius_family(p, m)?;
            let mut d = moebius_second_term(p, m)?;
            if conjugate {
                c = c.conjugate_map();
                d = d.conjugate_map();
            }
            Ok(SweepRow {
                a,
                k,
                one_sided: sobolev_spectral(&c, &one),
                two_sided: sobolev_spectral(&c, &two),
                second_term: sobolev_spectral(&d, &two).sqrt(),
            })
        })
        .collect::<Result<_>>()?;
    let mut fits = Vec::new();
    if (s - 0.5).abs() > 1e-12 {
        let col = |f: fn(&SweepRow) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
        if sweep_a {
            let gap = col(|r| 1.0 - r.a);
            if conjugate {
                let inv = col(|r| 1.0 / (1.0 - r.a));
                fits.push(log_log_fit(
                    fits::TWO_SIDED_VS_INVERSE_GAP,
                    &inv,
                    &col(|r| r.two_sided),
                    Some(2.0 * s - 1.0),
                )?);
            } else {
                fits.push(log_log_fit(
                    fits::SECOND_TERM_VS_GAP,
                    &gap,
                    &col(|r| r.second_term),
                    Some(0.5 - s),
                )?);
                let analytic = col(|r| r.one_sided.sqrt());
                fits.push(log_log_fit(fits::ANALYTIC_VS_GAP, &gap, &analytic, None)?);
            }
        } else {
            let k = col(|r| r.k as f64);
            fits.push(log_log_fit(
                fits::TWO_SIDED_VS_K,
                &k,
                &col(|r| r.two_sided),
                Some(2.0 * s),
            )?);
        }
    }
    let (lo, hi) = rows.iter().fold((f64::INFINITY, 0.0f64), |(l, h), r| {
        (l.min(r.one_sided), h.max(r.one_sided))
    });
    Ok(SweepTable {
        s,
        conjugate,
        rows,
        fits,
        one_sided_range: if lo > 0.0 { hi / lo } else { f64::INFINITY },
    })
}

/// `1 - 2^{-m}` for `m = lo, lo + 1/per_octave, …, hi`.
pub fn dyadic_gaps(lo: u32, hi: u32, per_octave: u32) -> Vec<f64> {
    let per = per_octave.max(1);
    (lo * per..=hi * per)
        .map(|i| 1.0 - 0.5f64.powf(i as f64 / per as f64))
        .collect()
}

/// Default grid for the un-conjugated sweep in `a`.
pub fn default_a_grid() -> Vec<f64> {
    dyadic_gaps(2, 7, 4)
}

/// Default grid for the conjugated sweep in `a`.
pub fn default_conjugate_grid() -> Vec<f64> {
    dyadic_gaps(3, 8, 4)
}

/// Default grid for the sweep in `k`.
pub fn default_k_grid() -> Vec<u64> {
    (1..=20).collect()
}

/// Gap `k` used by the default sweep in `a`.
pub const DEFAULT_SWEEP_K: u64 = 8;

/// Radius used by the default sweep in `k`.
pub const DEFAULT_SWEEP_A: f64 = 0.9;
