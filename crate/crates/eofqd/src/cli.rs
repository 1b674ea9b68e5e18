//! Subcommands of the `eofqd` binary.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eofqd_core::bounds::{full_report, BoundsReport, ReportInput};
use eofqd_core::curves::{
    ca_curve, co_curve, f_lower, f_upper, r_lower, r_upper, CurveKind, EvalMode,
};
use eofqd_core::entropy::von_neumann_entropy;
use eofqd_core::observables::{
    lambdas_from_state, simulate_shots, CorrelationMeasurementRecord, LambdaSet,
};
use eofqd_core::oracles::{concurrence_2q, discord_bruteforce, eof_2q, MIN_GRID};
use eofqd_core::sample::{sample_in_window, PurityWindow};
use eofqd_core::state::{PuritySource, PurityTriple, Subsystem};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::figures::{generate, FigureId, FigureSpec, Table};
use crate::io::{read_state, write_atomic, write_state};

#[derive(Debug, Parser)]
#[command(
    name = "eofqd",
    version,
    about = "Observable bounds on entanglement of formation and quantum discord"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound report (JSON) for a state, purities or two-copy probabilities.
    Bounds(BoundsArgs),
    /// Walk measured probabilities through purities, Lambdas and both bound intervals.
    Experiment(ExperimentArgs),
    /// Reference EOF or discord of a state file.
    Oracle(OracleArgs),
    /// Write random states with mixedness in a window.
    Sample(SampleArgs),
    /// Regenerate figure data as CSV.
    Figure(FigureArgs),
    /// Sample entropy boundary curves and their envelope as CSV.
    Curves(CurvesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Clamped,
    PaperCompat,
}

impl From<ModeArg> for EvalMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => EvalMode::Strict,
            ModeArg::Clamped => EvalMode::Clamped,
            ModeArg::PaperCompat => EvalMode::PaperCompat,
        }
    }
}

#[derive(Debug, Args)]
pub struct ProbabilityArgs {
    /// Two-copy probabilities `p--,p-+,p+-`.
    #[arg(long, value_delimiter = ',')]
    pub probs: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    pub pmm: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub pmp: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub ppm: Option<f64>,
}

impl ProbabilityArgs {
    fn given(&self) -> bool {
        self.probs.is_some() || self.pmm.is_some() || self.pmp.is_some() || self.ppm.is_some()
    }

    fn record(&self) -> Result<Option<CorrelationMeasurementRecord>> {
        let triple = match (&self.probs, self.pmm, self.pmp, self.ppm) {
            (None, None, None, None) => return Ok(None),
            (Some(p), None, None, None) => three(p, "--probs")?,
            (None, Some(a), Some(b), Some(c)) => [a, b, c],
            _ => {
                return Err(CliError::Usage(
                    "give either --probs or all of --pmm, --pmp, --ppm".into(),
                ))
            }
        };
        Ok(Some(CorrelationMeasurementRecord::new(
            triple[0], triple[1], triple[2], None,
        )?))
    }
}

fn three(v: &[f64], flag: &str) -> Result<[f64; 3]> {
    <[f64; 3]>::try_from(v)
        .map_err(|_| CliError::Usage(format!("{flag} takes three comma-separated values")))
}

fn parse_dims(s: &str) -> std::result::Result<(usize, usize), String> {
    let (m, n) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected MxN, got `{s}`"))?;
    let p = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad dimension `{t}`: {e}"))
    };
    Ok((p(m)?, p(n)?))
}

fn parse_window(s: &str) -> std::result::Result<PurityWindow, String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got `{s}`"))?;
    let p = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|e| format!("bad bound `{t}`: {e}"))
    };
    Ok(PurityWindow::new(p(lo)?, p(hi)?))
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Density-matrix JSON file.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Purities `Tr rho^2,Tr rho_A^2,Tr rho_B^2`.
    #[arg(long, value_delimiter = ',')]
    pub purities: Option<Vec<f64>>,
    #[command(flatten)]
    pub probs: ProbabilityArgs,
    /// Subsystem dimensions, required with --purities and --probs.
    #[arg(long, value_parser = parse_dims)]
    pub dims: Option<(usize, usize)>,
    #[arg(long, value_enum, default_value = "clamped")]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[command(flatten)]
    pub probs: ProbabilityArgs,
    /// Simulate the measurement on this two-qubit state instead.
    #[arg(long, requires = "shots")]
    pub state: Option<PathBuf>,
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Emit JSON instead of the text tables.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    Eof,
    Discord,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(value_enum)]
    pub kind: OracleKind,
    #[arg(long)]
    pub state: PathBuf,
    #[arg(long, default_value_t = 128)]
    pub grid: usize,
    #[arg(long)]
    pub refine: bool,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_parser = parse_dims)]
    pub dims: (usize, usize),
    /// Window `lo:hi` on `sqrt(1 - Tr rho^2)`.
    #[arg(long, value_parser = parse_window)]
    pub window: PurityWindow,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output directory (created if missing).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub id: FigureId,
    /// Output CSV path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// States per window, spectra, or sample points, depending on the figure.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Windows `lo:hi` for fig1/fig2 (repeatable).
    #[arg(long = "window", value_parser = parse_window)]
    pub windows: Vec<PurityWindow>,
    /// Dimensions for fig1/fig2.
    #[arg(long, value_parser = parse_dims)]
    pub dims: Option<(usize, usize)>,
    /// Spectrum length (fig3/fig4) or curve dimension (delta).
    #[arg(long)]
    pub d: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveArg {
    #[value(name = "coRL", alias = "corl")]
    CoRL,
    #[value(name = "caFU", alias = "cafu")]
    CaFU,
}

#[derive(Debug, Args)]
pub struct CurvesArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, value_enum)]
    pub curve: CurveArg,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs a parsed command and returns what it prints on standard output.
pub fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Bounds(a) => cmd_bounds(&a),
        Command::Experiment(a) => cmd_experiment(&a),
        Command::Oracle(a) => cmd_oracle(&a),
        Command::Sample(a) => cmd_sample(&a),
        Command::Figure(a) => cmd_figure(&a),
        Command::Curves(a) => cmd_curves(&a),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn require_dims(dims: Option<(usize, usize)>, what: &str) -> Result<(usize, usize)> {
    dims.ok_or_else(|| CliError::Usage(format!("--dims is required with {what}")))
}

pub fn cmd_bounds(a: &BoundsArgs) -> Result<String> {
    let sources = [a.state.is_some(), a.purities.is_some(), a.probs.given()];
    if sources.iter().filter(|&&x| x).count() != 1 {
        return Err(CliError::Usage(
            "give exactly one of --state, --purities, --probs".into(),
        ));
    }
    let mode = a.mode.into();
    let report = if let Some(path) = &a.state {
        let rho = read_state(path)?;
        full_report(ReportInput::State(&rho), mode)?
    } else if let Some(p) = &a.purities {
        let (m, n) = require_dims(a.dims, "--purities")?;
        let [t, ta, tb] = three(p, "--purities")?;
        let triple = PurityTriple::new(t, ta, tb, PuritySource::FromProbabilities)?;
        full_report(
            ReportInput::Purities {
                purities: &triple,
                m,
                n,
            },
            mode,
        )?
    } else {
        let (m, n) = require_dims(a.dims, "--probs")?;
        let record = a.probs.record()?.expect("probabilities given");
        full_report(
            ReportInput::Probabilities {
                record: &record,
                m,
                n,
            },
            mode,
        )?
    };
    Ok(to_json(&report))
}

#[derive(Debug, Serialize)]
struct ExperimentOutput {
    record: CorrelationMeasurementRecord,
    marginal_bounds_respected: bool,
    clamped: BoundsReport,
    paper_compat: BoundsReport,
    exact_lambdas: Option<LambdaSet>,
}

pub fn cmd_experiment(a: &ExperimentArgs) -> Result<String> {
    let (record, exact) = match (&a.state, a.probs.given()) {
        (Some(_), true) => {
            return Err(CliError::Usage(
                "give either probabilities or --state, not both".into(),
            ))
        }
        (None, false) => {
            return Err(CliError::Usage(
                "give --probs (or --pmm/--pmp/--ppm) or --state".into(),
            ))
        }
        (Some(path), false) => {
            let rho = read_state(path)?;
            if rho.dims() != (2, 2) {
                return Err(CliError::Validation(
                    "shot simulation needs a two-qubit state".into(),
                ));
            }
            let shots = a
                .shots
                .ok_or_else(|| CliError::Usage("--shots is required with --state".into()))?;
            (
                simulate_shots(&rho, shots, a.seed)?,
                Some(lambdas_from_state(&rho)),
            )
        }
        (None, true) => {
            if a.shots.is_some() {
                return Err(CliError::Usage("--shots needs --state".into()));
            }
            (a.probs.record()?.expect("probabilities given"), None)
        }
    };
    let input = ReportInput::Probabilities {
        record: &record,
        m: 2,
        n: 2,
    };
    let out = ExperimentOutput {
        record,
        marginal_bounds_respected: record.respects_marginal_bounds(2, 2),
        clamped: full_report(input, EvalMode::Clamped)?,
        paper_compat: full_report(input, EvalMode::PaperCompat)?,
        exact_lambdas: exact,
    };
    if a.json {
        return Ok(to_json(&out));
    }
    Ok(experiment_text(&out))
}

fn experiment_text(o: &ExperimentOutput) -> String {
    let r = &o.record;
    let p = &o.clamped.purities;
    let l = &o.clamped.lambdas;
    let mut s = String::new();
    let _ = writeln!(s, "two-copy probabilities");
    let _ = writeln!(
        s,
        "  p(-,-) = {:.3}   p(-,+) = {:.3}   p(+,-) = {:.3}",
        r.p_mm, r.p_mp, r.p_pm
    );
    if let (Some(shots), Some(c)) = (r.shot_count, r.counts) {
        let _ = writeln!(s, "  simulated from {shots} shots, counts {c:?}");
    }
    if !o.marginal_bounds_respected {
        let _ = writeln!(
            s,
            "  note: marginal sums exceed 1/4, so a reduced purity is below 1/2"
        );
    }
    let _ = writeln!(s, "purities");
    let _ = writeln!(
        s,
        "  Tr rho^2 = {:.3}   Tr rho_A^2 = {:.3}   Tr rho_B^2 = {:.3}",
        p.tr_rho2, p.tr_rho_a2, p.tr_rho_b2
    );
    let _ = writeln!(s, "lambdas");
    for (i, v) in l.as_array().iter().enumerate() {
        let _ = write!(s, "  L{} = {:.3}", i + 1, v);
        if let Some(exact) = &o.exact_lambdas {
            let _ = write!(s, "  (exact {:.3})", exact.as_array()[i]);
        }
        let _ = writeln!(s);
    }
    for (name, rep) in [("clamped", &o.clamped), ("paper-compat", &o.paper_compat)] {
        let _ = writeln!(s, "bounds, {name} mode");
        let _ = writeln!(s, "  {:.3} <= E_F <= {:.3}", rep.eof.lower, rep.eof.upper);
        let [a, b, c] = rep.discord_lower_terms;
        let [d, e, f] = rep.discord_upper_terms;
        let _ = writeln!(
            s,
            "  {:.3} <= D_A <= {:.3}   (lower {a:.4} - {b:.4} + {c:.4}, upper {d:.4} - {e:.4} + {f:.4})",
            rep.discord.lower, rep.discord.upper
        );
        let _ = writeln!(s, "  flags: {:?}", rep.flags);
    }
    s
}

#[derive(Debug, Serialize)]
struct OracleOutput {
    quantity: &'static str,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    concurrence: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    refined: Option<bool>,
}

pub fn cmd_oracle(a: &OracleArgs) -> Result<String> {
    if a.kind == OracleKind::Discord && a.grid < MIN_GRID {
        return Err(CliError::Usage(format!(
            "--grid must be at least {MIN_GRID}"
        )));
    }
    let rho = read_state(&a.state)?;
    let out = match a.kind {
        OracleKind::Eof => {
            if rho.dims() == (2, 2) {
                let c = concurrence_2q(&rho)?;
                OracleOutput {
                    quantity: "eof",
                    value: eof_2q(&rho)?,
                    concurrence: Some(c),
                    theta: None,
                    phi: None,
                    grid: None,
                    refined: None,
                }
            } else if rho.rank()? == 1 {
                // a pure state's EOF is the entropy of either marginal
                OracleOutput {
                    quantity: "eof",
                    value: von_neumann_entropy(&rho.partial_trace(Subsystem::A))?,
                    concurrence: None,
                    theta: None,
                    phi: None,
                    grid: None,
                    refined: None,
                }
            } else {
                return Err(CliError::Validation(
                    "the EOF oracle covers two-qubit states and pure states only".into(),
                ));
            }
        }
        OracleKind::Discord => {
            let r = discord_bruteforce(&rho, a.grid, a.refine)?;
            let (theta, phi) = r.angles();
            OracleOutput {
                quantity: "discord",
                value: r.value,
                concurrence: None,
                theta: Some(theta),
                phi: Some(phi),
                grid: Some(r.grid_resolution),
                refined: Some(r.refined),
            }
        }
    };
    Ok(to_json(&out))
}

pub fn cmd_sample(a: &SampleArgs) -> Result<String> {
    let (m, n) = a.dims;
    if a.count == 0 {
        return Err(CliError::Validation("count must be at least 1".into()));
    }
    let states = sample_in_window(m, n, a.window, a.count, a.seed)?;
    fs::create_dir_all(&a.out).map_err(|e| CliError::io(&a.out, e))?;
    let width = a.count.to_string().len().max(4);
    let mut listing = String::new();
    for (i, rho) in states.into_iter().enumerate() {
        let label = format!(
            "{m}x{n} window {}:{} seed {}",
            a.window.lo,
            a.window.hi,
            a.seed.wrapping_add(i as u64)
        );
        let path = a.out.join(format!("state_{i:0width$}.json"));
        write_state(&path, &rho.with_label(label))?;
        let _ = writeln!(listing, "{}", path.display());
    }
    Ok(listing)
}

fn emit_table(table: &Table, out: &Option<PathBuf>) -> Result<String> {
    let csv = table.to_csv();
    match out {
        Some(path) => {
            write_atomic(path, csv.as_bytes())?;
            Ok(format!(
                "wrote {} rows to {}\n",
                table.rows.len(),
                path.display()
            ))
        }
        None => Ok(csv),
    }
}

pub fn cmd_figure(a: &FigureArgs) -> Result<String> {
    let mut spec = FigureSpec::new(a.id);
    spec.seed = a.seed;
    if let Some(c) = a.count {
        spec.count = c;
    }
    if !a.windows.is_empty() {
        spec.windows = a.windows.clone();
    }
    if let Some(d) = a.dims {
        spec.dims = d;
    }
    if let Some(d) = a.d {
        spec.d = d;
    }
    emit_table(&generate(&spec)?, &a.out)
}

pub fn cmd_curves(a: &CurvesArgs) -> Result<String> {
    if a.samples < 2 {
        return Err(CliError::Validation("samples must be at least 2".into()));
    }
    let curve = match a.curve {
        CurveArg::CoRL => co_curve(a.d)?,
        CurveArg::CaFU => ca_curve(a.d)?,
    };
    let (lo, hi) = curve.domain();
    let d = a.d;
    let rows = (0..a.samples)
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / (a.samples - 1) as f64;
            let env = curve.eval(x)?;
            Ok(match curve.kind {
                CurveKind::CoRL => vec![
                    x,
                    r_lower(d, x, EvalMode::Clamped)?,
                    env,
                    r_upper(d, x, EvalMode::Clamped)?,
                ],
                CurveKind::CaFU => vec![
                    x,
                    f_lower(d, x, EvalMode::Clamped)?,
                    f_upper(d, x, EvalMode::Clamped)?,
                    env,
                ],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let header = match curve.kind {
        CurveKind::CoRL => vec!["lambda", "r_l", "co_r_l", "r_u"],
        CurveKind::CaFU => vec!["tau", "f_l", "f_u", "ca_f_u"],
    };
    emit_table(&Table { header, rows }, &a.out)
}
