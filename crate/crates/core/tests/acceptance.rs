//! Acceptance criteria, one line each.

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::Rng;

use unimodular::blaschke::{
    default_a_grid, default_conjugate_grid, default_k_grid, fits, r1_construct, scaling_sweep,
    DEFAULT_SWEEP_A, DEFAULT_SWEEP_K,
};
use unimodular::degree::{degree_brezis, degree_winding, PhaseLift};
use unimodular::kernels::{angle_grid, jn_bound_check, kns_table, KernelSpec};
use unimodular::maps::{random_phase_maps, random_small_phases, random_zero_degree_maps, rng};
use unimodular::norms::{
    projection_bound_check, sobolev_integral, sobolev_spectral, SobolevParams, WeightSeq,
};
use unimodular::pipeline::{
    analytic_share, chord_margin, outer, verify_half_case, vmo_entry, PipelineConfig,
};
use unimodular::spectrum::{analyze, hilbert, synthesize};
use unimodular::{run_suite, FourierCoeffs, SuiteConfig, SuiteName};

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed <= Duration::from_secs(limit_s)
}

fn degree_cross_validation() -> Outcome {
    let start = Instant::now();
    let maps = random_phase_maps(SEED, 100, 5, 10, 2.0).unwrap();
    let (mut agree, mut worst) = (0, 0.0f64);
    for m in &maps {
        let f = m.samples(4096).unwrap();
        let w = degree_winding(&f).unwrap().0;
        let b = degree_brezis(&analyze(f.samples(), 2047).unwrap());
        agree += usize::from(b.rounded == w && w == m.degree);
        worst = worst.max(b.residual);
    }
    let t = start.elapsed();
    outcome(
        agree == 100 && worst < 1e-6 && within(t, 30),
        format!(
            "{agree}/100 agree, max residual {worst:.2e}, {:.2} s",
            t.as_secs_f64()
        ),
    )
}

fn half_reports() -> Vec<unimodular::pipeline::HalfCaseReport> {
    let cfg = PipelineConfig::default();
    random_zero_degree_maps(SEED, 20, 6, 2.0)
        .unwrap()
        .iter()
        .map(|m| verify_half_case(&m.samples(1024).unwrap(), &cfg).unwrap())
        .collect()
}

fn brezis_bound_chain(reports: &[unimodular::pipeline::HalfCaseReport]) -> Outcome {
    let (mut stages, mut ok, mut worst) = (0, 0, 0.0f64);
    for r in reports {
        for st in r.gated_stages() {
            stages += 1;
            let pos = st.positive <= 16.0 * r.c * 1.01;
            let two = st.two_sided <= 32.0 * r.c * 1.01;
            ok += usize::from(pos && two);
            if r.c > 0.0 {
                worst = worst
                    .max(st.positive / (16.0 * r.c))
                    .max(st.two_sided / (32.0 * r.c));
            }
        }
    }
    let every_map_gated = reports.iter().all(|r| r.gated_stages().count() > 0);
    outcome(
        every_map_gated && ok == stages,
        format!("{ok}/{stages} gated stages within 16C and 32C, worst ratio {worst:.3}"),
    )
}

fn anti_analytic_identity(reports: &[unimodular::pipeline::HalfCaseReport]) -> Outcome {
    let worst = reports
        .iter()
        .flat_map(|r| r.gated_stages())
        .map(|s| s.identity_residual)
        .fold(0.0, f64::max);
    outcome(worst < 1e-8, format!("max block residual {worst:.2e}"))
}

fn remark_scaling_laws() -> Outcome {
    let start = Instant::now();
    let a = scaling_sweep(0.25, &default_a_grid(), &[DEFAULT_SWEEP_K], false).unwrap();
    let k = scaling_sweep(0.25, &[DEFAULT_SWEEP_A], &default_k_grid(), false).unwrap();
    let c = scaling_sweep(0.75, &default_conjugate_grid(), &[1], true).unwrap();
    let slopes = [
        (a.fit(fits::SECOND_TERM_VS_GAP).unwrap().slope, 0.5 - 0.25),
        (k.fit(fits::TWO_SIDED_VS_K).unwrap().slope, 2.0 * 0.25),
        (
            c.fit(fits::TWO_SIDED_VS_INVERSE_GAP).unwrap().slope,
            2.0 * 0.75 - 1.0,
        ),
    ];
    let t = start.elapsed();
    let fits_ok = slopes.iter().all(|(s, target)| (s - target).abs() <= 0.05);
    outcome(
        fits_ok && c.one_sided_range <= 2.0 && within(t, 60),
        format!(
            "slopes {:.4} / {:.4} / {:.4} against 0.25 / 0.5 / 0.5, one-sided range {:.3}, {:.2} s",
            slopes[0].0,
            slopes[1].0,
            slopes[2].0,
            c.one_sided_range,
            t.as_secs_f64()
        ),
    )
}

fn kernel_decay() -> Outcome {
    let mut ok = true;
    let mut worst_drift = 0.0f64;
    let mut cs = Vec::new();
    for s in [0.25, 0.5, 0.75] {
        let fitted: Vec<f64> = [64u64, 128, 256]
            .iter()
            .map(|&n| {
                let t = kns_table(
                    &KernelSpec::new(n, s).unwrap(),
                    &angle_grid(32 * n as usize),
                )
                .unwrap();
                ok &= t.fitted_c.is_finite() && t.bounded_by(t.fitted_c);
                t.fitted_c
            })
            .collect();
        for w in fitted.windows(2) {
            worst_drift = worst_drift.max((w[1] / w[0] - 1.0).abs());
        }
        cs.push(fitted[2]);
    }
    outcome(
        ok && worst_drift <= 0.15,
        format!(
            "c_s = {:.4}, {:.4}, {:.4}; max drift under doubling {worst_drift:.2e}",
            cs[0], cs[1], cs[2]
        ),
    )
}

fn norm_equivalence() -> Outcome {
    let maps = random_phase_maps(SEED, 10, 5, 10, 2.0).unwrap();
    let samples: Vec<_> = maps.iter().map(|m| m.samples(1024).unwrap()).collect();
    let mut widths = Vec::new();
    for s in [0.25, 0.5, 0.75] {
        let mut ratios = Vec::new();
        for f in &samples {
            let c = unimodular::spectrum::analyze_full(f.samples());
            for n in [16u64, 32, 64] {
                let p = SobolevParams::two_sided(s).unwrap().truncated(n);
                ratios.push(
                    sobolev_integral(f.samples(), s, n as f64).unwrap() / sobolev_spectral(&c, &p),
                );
            }
        }
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().copied().fold(0.0, f64::max);
        widths.push(if lo > 0.0 { hi / lo } else { f64::INFINITY });
    }
    outcome(
        widths.iter().all(|w| *w <= 50.0),
        format!(
            "bracket width ratios {:.3} / {:.3} / {:.3}",
            widths[0], widths[1], widths[2]
        ),
    )
}

fn theorem3() -> Outcome {
    let (mut total, mut proj, mut rem) = (0, 0, 0);
    let mut worst = 0.0f64;
    for (i, s) in [0.9, 1.2, 1.5].into_iter().enumerate() {
        for p in random_small_phases(SEED + i as u64, 20, 6, s, 0.01, 0.1).unwrap() {
            let r = projection_bound_check(&p.sample(256), s).unwrap();
            total += 1;
            proj += usize::from(r.f_norm <= 3.0 * r.pf_norm);
            rem += usize::from(r.h_norm <= r.delta * r.phi_norm);
            worst = worst.max(r.ratio);
        }
    }
    outcome(
        proj == total && rem == total,
        format!("{proj}/{total} projection bounds, {rem}/{total} remainder bounds, max ratio {worst:.4}"),
    )
}

fn r1_witness() -> Outcome {
    let w = r1_construct(&WeightSeq::Log, 5, 2.0).unwrap();
    let increasing = w.stages.windows(2).all(|p| p[1].lower > p[0].upper);
    let growth = w.stages.windows(2).all(|p| p[1].lower >= 2.0 * p[0].upper);
    let unit = r1_construct(&WeightSeq::Unit, 5, 2.0).unwrap();
    let ceiling = !unit.complete
        && unit
            .diagnostic
            .as_deref()
            .is_some_and(|d| d.contains("Parseval"));
    let exps: Vec<String> = w.stages.iter().map(|s| s.log2_nu.to_string()).collect();
    outcome(
        w.complete && increasing && growth && w.spec.divisibility_holds() && ceiling,
        format!(
            "log2 nu = [{}], final norm in [{:.4}, {:.4}], unit weight stops at stage {}",
            exps.join(", "),
            w.stages.last().unwrap().lower,
            w.stages.last().unwrap().upper,
            unit.stages.len()
        ),
    )
}

fn property_suite() -> Outcome {
    let start = Instant::now();
    let mut r = rng(SEED, 9);
    let violations = (0..1_000_000)
        .filter(|_| chord_margin(r.gen_range(-10.0..=10.0), r.gen_range(-10.0..=10.0)) < 0.0)
        .count();

    let mut parseval = 0.0f64;
    let mut involution = 0.0f64;
    for _ in 0..50 {
        let c = FourierCoeffs::from_fn(32, |_| {
            Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
        });
        let f = synthesize(&c, 128).unwrap();
        let mean_sq = f.values().iter().map(|z| z.norm_sqr()).sum::<f64>() / 128.0;
        parseval = parseval.max((mean_sq - c.energy()).abs() / c.energy());
        let mut expect = c.scale(Complex64::new(-1.0, 0.0));
        expect.set(0, Complex64::new(0.0, 0.0));
        involution = involution.max(hilbert(&hilbert(&c)).max_abs_diff(&expect));
    }

    let (mut modulus, mut share) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let a: Vec<f64> = (0..4).map(|_| r.gen_range(-0.05..0.05)).collect();
        let rho: Vec<f64> = (0..1024)
            .map(|j| {
                let t = std::f64::consts::TAU * j as f64 / 1024.0;
                (a.iter()
                    .enumerate()
                    .map(|(k, c)| c * ((k + 1) as f64 * t).cos())
                    .sum::<f64>())
                .exp()
            })
            .collect();
        let o = outer(&rho).unwrap();
        for (z, p) in o.values().iter().zip(&rho) {
            modulus = modulus.max((z.norm() * p - 1.0).abs());
        }
        share = share.max(analytic_share(&o));
    }

    let cfg = PipelineConfig::default();
    let window_ok = random_zero_degree_maps(SEED, 5, 3, 0.5)
        .unwrap()
        .iter()
        .all(|m| {
            let rep = vmo_entry(&m.samples(1024).unwrap(), 0.25, &cfg).unwrap();
            rep.checks
                .iter()
                .filter(|c| c.name.contains("windowwise"))
                .all(|c| c.pass)
        });

    let phase: Vec<f64> = (0..256)
        .map(|j| 0.3 * (std::f64::consts::TAU * j as f64 / 256.0).sin())
        .collect();
    let jn = jn_bound_check(
        &PhaseLift::from_values(phase, 0),
        &KernelSpec::new(8, 0.5).unwrap(),
    )
    .unwrap();
    let jn_zero = jn.j_spectral.abs().max(jn.j_integral.abs());

    let t = start.elapsed();
    let pass = violations == 0
        && parseval < 1e-12
        && involution < 1e-12
        && modulus < 1e-8
        && share < 1e-8
        && window_ok
        && jn_zero < 1e-10
        && within(t, 30);
    outcome(
        pass,
        format!(
            "{violations} chord violations in 1e6 pairs, Parseval {parseval:.1e}, involution {involution:.1e}, outer modulus {modulus:.1e}, analytic share {share:.1e}, windowwise {window_ok}, J_N {jn_zero:.1e}, {:.2} s",
            t.as_secs_f64()
        ),
    )
}

fn determinism() -> Outcome {
    let run = |threads| {
        run_suite(&SuiteConfig {
            suites: SuiteName::ALL.to_vec(),
            seed: 11,
            threads: Some(threads),
            ..SuiteConfig::default()
        })
        .unwrap()
        .to_json()
    };
    let (a, b, c) = (run(4), run(4), run(1));
    outcome(
        a == b && a == c,
        format!(
            "{} report bytes, two runs and worker counts 1 and 4 compared",
            a.len()
        ),
    )
}

fn main() {
    let reports = half_reports();
    let criteria: [(&str, &dyn Fn() -> Outcome); 10] = [
        ("1 degree cross-validation", &degree_cross_validation),
        ("2 half-case bound chain", &|| brezis_bound_chain(&reports)),
        ("3 anti-analytic block identity", &|| {
            anti_analytic_identity(&reports)
        }),
        ("4 counterexample scaling laws", &remark_scaling_laws),
        ("5 kernel decay", &kernel_decay),
        ("6 norm equivalence", &norm_equivalence),
        ("7 small-phase projection bound", &theorem3),
        ("8 Blaschke witness", &r1_witness),
        ("9 property suite", &property_suite),
        ("10 determinism", &determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let o = run();
        println!(
            "criterion {name}: {} ({})",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {}/{} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
