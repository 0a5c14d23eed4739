use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use unimodular::blaschke::{
    default_a_grid, default_conjugate_grid, default_k_grid, r1_construct, scaling_sweep,
    DEFAULT_SWEEP_A, DEFAULT_SWEEP_K,
};
use unimodular::degree::{degree_brezis, degree_winding, DegreeResult};
use unimodular::io::{read_coeffs, read_samples, write_kernel_csv, write_sweep_csv};
use unimodular::kernels::{angle_grid, kns_table, KernelSpec};
use unimodular::norms::{sobolev_integral, sobolev_spectral, Side, SobolevParams, WeightSeq};
use unimodular::pipeline::{verify_half_case, verify_small_case, vmo_entry, PipelineConfig};
use unimodular::report::{to_json_bytes, Environment, Observation};
use unimodular::spectrum::{analyze, synthesize};
use unimodular::suite::run_suite_with_artifacts;
use unimodular::{
    Check, Error, FourierCoeffs, SuiteConfig, SuiteName, UnimodularSamples, VerificationReport,
};

/// Fourier analysis of unimodular circle maps.
#[derive(Parser)]
#[command(name = "unimodular", version)]
struct Cli {
    /// Sample count (power of two).
    #[arg(long, global = true, default_value_t = 4096)]
    grid: usize,
    /// Coefficient bandwidth M; defaults to grid/2 - 1.
    #[arg(long, global = true)]
    bandwidth: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Degree by winding number and by the spectral sum.
    Degree(DegreeArgs),
    /// Fractional Sobolev seminorm.
    Norm(NormArgs),
    /// Tabulate the scaled kernel against its majorant.
    Kernel(KernelArgs),
    /// Run the smoothing pipeline on one map.
    Verify(VerifyArgs),
    /// Scaling sweep over the Möbius counterexample family.
    Counterexample(SweepArgs),
    /// Blaschke product constructions.
    #[command(subcommand)]
    Blaschke(BlaschkeCommand),
    /// Seeded verification suites.
    Suite(SuiteArgs),
}

#[derive(Args)]
struct Input {
    /// Coefficient file (CSV `n,re,im` or JSON).
    #[arg(long = "in", conflicts_with = "samples")]
    input: Option<PathBuf>,
    /// Sample file (CSV `j,re,im`).
    #[arg(long)]
    samples: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Winding,
    Brezis,
    Both,
}

#[derive(Args)]
struct DegreeArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    method: Method,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    One,
    Two,
}

#[derive(Clone, Copy, ValueEnum)]
enum Form {
    Spectral,
    Integral,
}

#[derive(Args)]
struct NormArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    s: f64,
    #[arg(long, value_enum, default_value_t = SideArg::Two)]
    side: SideArg,
    #[arg(long, value_enum, default_value_t = Form::Spectral)]
    form: Form,
    /// Frequency cap; the integral form uses it as its scale.
    #[arg(long)]
    ncut: Option<u64>,
}

#[derive(Args)]
struct KernelArgs {
    #[arg(long = "N")]
    n: u64,
    #[arg(long)]
    s: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Case {
    Half,
    Small,
    Vmo,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum)]
    case: Case,
    #[arg(long, default_value_t = 0.25)]
    s: f64,
    /// Report path; overrides `--out`.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepParam {
    A,
    K,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    s: f64,
    #[arg(long, value_enum)]
    sweep: SweepParam,
    /// Sweep the conjugated family.
    #[arg(long)]
    conjugate: bool,
}

#[derive(Subcommand)]
enum BlaschkeCommand {
    /// Greedy construction with growing weighted Taylor norms.
    R1(R1Args),
}

#[derive(Args)]
struct R1Args {
    /// `log`, `unit`, or a path to a CSV column of weights.
    #[arg(long, default_value = "log")]
    weight: String,
    #[arg(long, default_value_t = 5)]
    stages: usize,
    #[arg(long, default_value_t = 2.0)]
    growth: f64,
}

#[derive(Args)]
struct SuiteArgs {
    /// Comma-separated subset of degree,half,small,vmo,kernel,sweep,r1,theorem3.
    #[arg(long, value_delimiter = ',')]
    suites: Option<Vec<String>>,
    /// Coefficient file for the degree suite.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// Smoothness for the small and VMO cases.
    #[arg(long, default_value_t = 0.25)]
    s: f64,
    /// Write the sweep tables here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the Blaschke witness here.
    #[arg(long)]
    witness: Option<PathBuf>,
}

/// Outcome of a command that produced its output.
enum Status {
    Pass,
    Fail,
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().lock().write_all(bytes)?;
            Ok(())
        }
    }
}

fn emit_json<T: serde::Serialize>(out: Option<&Path>, value: &T) -> anyhow::Result<()> {
    emit(out, &to_json_bytes(value))
}

fn load_coeffs(input: &Input, cli: &Cli) -> anyhow::Result<FourierCoeffs> {
    match (&input.input, &input.samples) {
        (Some(p), _) => Ok(read_coeffs(p)?),
        (None, Some(p)) => {
            let s = read_samples(p)?;
            let m = cli.bandwidth.unwrap_or(s.len() / 2 - 1);
            Ok(analyze(&s, m)?)
        }
        (None, None) => bail!(Error::InvalidParameter("pass --in or --samples".into())),
    }
}

fn grid_for(coeffs: &FourierCoeffs, grid: usize) -> usize {
    grid.max((2 * coeffs.bandwidth() + 2).next_power_of_two())
}

fn load_map(input: &Input, cli: &Cli) -> anyhow::Result<UnimodularSamples> {
    let samples = match (&input.input, &input.samples) {
        (None, Some(p)) => read_samples(p)?,
        _ => {
            let c = load_coeffs(input, cli)?;
            synthesize(&c, grid_for(&c, cli.grid))?
        }
    };
    Ok(UnimodularSamples::new(samples, 1e-6)?)
}

fn degree(cli: &Cli, a: &DegreeArgs) -> anyhow::Result<Status> {
    let coeffs = load_coeffs(&a.input, cli)?;
    let winding = || -> anyhow::Result<i64> {
        let f = UnimodularSamples::new(synthesize(&coeffs, grid_for(&coeffs, cli.grid))?, 1e-6)?;
        Ok(degree_winding(&f)?.0)
    };
    let r: DegreeResult = match a.method {
        Method::Brezis => degree_brezis(&coeffs),
        Method::Winding => {
            let w = winding()?;
            let b = degree_brezis(&coeffs);
            DegreeResult {
                winding: Some(w),
                ..b
            }
        }
        Method::Both => DegreeResult {
            winding: Some(winding()?),
            ..degree_brezis(&coeffs)
        },
    };
    let body = match a.method {
        Method::Winding => json!({ "winding": r.winding }),
        _ => json!({
            "spectral_sum": r.spectral_sum,
            "rounded": r.rounded,
            "winding": r.winding,
            "residual": r.residual,
        }),
    };
    emit_json(cli.out.as_deref(), &body)?;
    Ok(if matches!(a.method, Method::Both) && !r.agrees() {
        Status::Fail
    } else {
        Status::Pass
    })
}

fn norm(cli: &Cli, a: &NormArgs) -> anyhow::Result<Status> {
    let side = match a.side {
        SideArg::One => Side::OneSided,
        SideArg::Two => Side::TwoSided,
    };
    let mut p = SobolevParams::new(a.s, side)?;
    if let Some(n) = a.ncut {
        p = p.truncated(n);
    }
    let (value, form) = match a.form {
        Form::Spectral => (
            sobolev_spectral(&load_coeffs(&a.input, cli)?, &p),
            "spectral",
        ),
        Form::Integral => {
            if matches!(a.side, SideArg::One) {
                bail!(Error::InvalidParameter(
                    "the integral form is two-sided".into()
                ));
            }
            let f = match (&a.input.input, &a.input.samples) {
                (None, Some(path)) => read_samples(path)?,
                _ => {
                    let c = load_coeffs(&a.input, cli)?;
                    synthesize(&c, grid_for(&c, cli.grid))?
                }
            };
            let scale = a.ncut.unwrap_or(f.len() as u64 / 2) as f64;
            (sobolev_integral(&f, a.s, scale)?, "integral")
        }
    };
    emit_json(
        cli.out.as_deref(),
        &json!({ "value": value, "form": form, "params": p }),
    )?;
    Ok(Status::Pass)
}

fn kernel(cli: &Cli, a: &KernelArgs) -> anyhow::Result<Status> {
    let spec = KernelSpec::new(a.n, a.s)?;
    let table = kns_table(&spec, &angle_grid(cli.grid))?;
    let mut buf = Vec::new();
    write_kernel_csv(&table, &mut buf)?;
    emit(cli.out.as_deref(), &buf)?;
    eprintln!(
        "fitted c = {:.6e}, max |Im K| = {:.3e}",
        table.fitted_c,
        table.max_imag()
    );
    Ok(Status::Pass)
}

fn verify(cli: &Cli, a: &VerifyArgs) -> anyhow::Result<Status> {
    let f = load_map(&a.input, cli)?;
    let cfg = PipelineConfig::default();
    let (checks, observations): (Vec<Check>, Vec<Observation>) = match a.case {
        Case::Half => {
            let r = verify_half_case(&f, &cfg)?;
            (r.checks, r.observations)
        }
        Case::Small => {
            let r = verify_small_case(&f, a.s, &cfg)?;
            (r.checks, r.observations)
        }
        Case::Vmo => {
            let r = vmo_entry(&f, a.s, &cfg)?;
            let mut checks = r.checks;
            checks.extend(r.small.checks.into_iter().map(|mut c| {
                c.name = format!("small.{}", c.name);
                c
            }));
            let mut obs = r.observations;
            obs.extend(r.small.observations);
            (checks, obs)
        }
    };
    let mut report = VerificationReport::new(Environment {
        grid: f.len(),
        bandwidth: f.len() / 2 - 1,
        seed: cli.seed,
    });
    report.extend_checks(checks);
    report.extend_observations(observations);
    emit(
        a.report.as_deref().or(cli.out.as_deref()),
        &report.to_json(),
    )?;
    Ok(if report.all_pass() {
        Status::Pass
    } else {
        Status::Fail
    })
}

fn counterexample(cli: &Cli, a: &SweepArgs) -> anyhow::Result<Status> {
    let table = match (a.sweep, a.conjugate) {
        (SweepParam::A, false) => scaling_sweep(a.s, &default_a_grid(), &[DEFAULT_SWEEP_K], false)?,
        (SweepParam::A, true) => scaling_sweep(a.s, &default_conjugate_grid(), &[1], true)?,
        (SweepParam::K, c) => scaling_sweep(a.s, &[DEFAULT_SWEEP_A], &default_k_grid(), c)?,
    };
    let label = match a.sweep {
        SweepParam::A => "a",
        SweepParam::K => "k",
    };
    let mut buf = Vec::new();
    write_sweep_csv(&[(label, &table)], &mut buf)?;
    emit(cli.out.as_deref(), &buf)?;
    for f in &table.fits {
        eprintln!("{}: slope {:.4} (target {:?})", f.name, f.slope, f.target);
    }
    Ok(Status::Pass)
}

fn parse_weight(spec: &str) -> anyhow::Result<WeightSeq> {
    Ok(match spec {
        "log" => WeightSeq::Log,
        "unit" => WeightSeq::Unit,
        path => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading weight table {path}"))?;
            let values = text
                .lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty())
                .map(|(i, l)| {
                    l.trim().parse::<f64>().map_err(|e| Error::Parse {
                        location: format!("{path}:{}", i + 1),
                        message: e.to_string(),
                    })
                })
                .collect::<Result<Vec<f64>, Error>>()?;
            WeightSeq::table(values)?
        }
    })
}

fn blaschke(cli: &Cli, cmd: &BlaschkeCommand) -> anyhow::Result<Status> {
    let BlaschkeCommand::R1(a) = cmd;
    let w = parse_weight(&a.weight)?;
    let outcome = r1_construct(&w, a.stages, a.growth)?;
    emit_json(cli.out.as_deref(), &outcome)?;
    if let Some(d) = &outcome.diagnostic {
        eprintln!("{d}");
    }
    Ok(if outcome.complete && outcome.trace_certified() {
        Status::Pass
    } else {
        Status::Fail
    })
}

fn suite(cli: &Cli, a: &SuiteArgs) -> anyhow::Result<Status> {
    let suites = match &a.suites {
        Some(names) => names
            .iter()
            .map(|n| n.parse())
            .collect::<Result<Vec<SuiteName>, _>>()?,
        None => SuiteName::ALL.to_vec(),
    };
    let cfg = SuiteConfig {
        suites,
        seed: cli.seed,
        grid: cli.grid,
        bandwidth: cli.bandwidth,
        s: a.s,
        input: a.input.clone(),
        threads: a.threads,
        ..SuiteConfig::default()
    };
    let outcome = run_suite_with_artifacts(&cfg)?;
    emit(cli.out.as_deref(), &outcome.report.to_json())?;
    if let Some(path) = &a.csv {
        let tables: Vec<(&str, &_)> = outcome
            .sweeps
            .iter()
            .map(|(l, t)| (l.as_str(), t))
            .collect();
        let mut buf = Vec::new();
        write_sweep_csv(&tables, &mut buf)?;
        std::fs::write(path, buf).with_context(|| format!("writing {}", path.display()))?;
    }
    if let (Some(path), Some(w)) = (&a.witness, &outcome.witness) {
        std::fs::write(path, to_json_bytes(w))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let s = outcome.report.summary;
    eprintln!(
        "{} checks, {} passed, {} failed",
        s.total, s.passed, s.failed
    );
    for c in outcome.report.failures() {
        eprintln!(
            "FAIL {}: lhs {:.6e} rhs {:.6e} margin {:.3e}",
            c.name, c.lhs, c.rhs, c.margin
        );
    }
    Ok(if outcome.report.all_pass() {
        Status::Pass
    } else {
        Status::Fail
    })
}

/// Exit 2 for unreadable or malformed input, 1 otherwise.
fn error_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::Parse { .. }
            | Error::Io(_)
            | Error::Json(_)
            | Error::InvalidParameter(_)
            | Error::BadSampleCount(_),
        ) => 2,
        Some(_) => 1,
        None if e.downcast_ref::<std::io::Error>().is_some() => 2,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Degree(a) => degree(&cli, a),
        Command::Norm(a) => norm(&cli, a),
        Command::Kernel(a) => kernel(&cli, a),
        Command::Verify(a) => verify(&cli, a),
        Command::Counterexample(a) => counterexample(&cli, a),
        Command::Blaschke(c) => blaschke(&cli, c),
        Command::Suite(a) => suite(&cli, a),
    };
    match result {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(error_code(&e))
        }
    }
}
