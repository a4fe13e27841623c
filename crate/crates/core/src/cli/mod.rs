//! Command-line interface.

pub mod format;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::analysis::sweep::{sweep, SweepRow, SweepSpec};
use crate::analysis::worst::{a1_best_worst_case, worst_case, SearchOptions};
use crate::analysis::{crossover_alpha, solve_wbar};
use crate::bounds::lower_bound;
use crate::error::Error;
use crate::model::{
    validate_scenario, CrashTime, ExitPlacement, FaultModel, RobotId, Scenario, Strategy,
    WorstCaseRecord,
};
use crate::simulator::{a2_case, simulate, MotionProgram};
use crate::strategies::{a2_meeting_chord, coincidence_zeta, evacuation_time, A2Pickup};
use crate::validation::{run_validation, ValidationConfig};
use format::{csv_table, fmt_num, parse_angle, parse_crash_time};

/// Environment variable naming the directory for output files.
pub const OUTPUT_DIR_VAR: &str = "EVAC_OUTPUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "disk-evac", version, about = "Evacuating two robots, one possibly faulty, from a unit disk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one scenario and print the outcome with its event log.
    Evaluate(EvaluateArgs),
    /// Worst case over exit positions for one strategy and crash time.
    WorstCase(WorstCaseArgs),
    /// Lower-bound table over a range of crash times.
    Bounds(BoundsArgs),
    /// Worst cases of every strategy over an (alpha, w, zeta) grid, as CSV.
    Sweep(SweepArgs),
    /// Crossover cost, coincidence angle and threshold table.
    Crossovers(CrossoversArgs),
    /// Randomized closed-form versus simulator agreement run.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyName {
    A0,
    /// Threshold combination below the crossover cost, otherwise the better
    /// of the two pure responses.
    A1,
    A1Together,
    A1Alone,
    A1Combined,
    A1Delayed,
    A2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Faulty {
    R1,
    R2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Pickup {
    AfterOwnArc,
    Immediate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct StrategyArgs {
    #[arg(long, value_enum)]
    strategy: StrategyName,
    /// Chauffeuring cost (>= 1).
    #[arg(long, value_parser = parse_angle)]
    alpha: f64,
    /// Separation angle for a2, e.g. `pi` or `2pi/3`.
    #[arg(long, value_parser = parse_angle)]
    zeta: Option<f64>,
    /// Extra search distance for a1-delayed.
    #[arg(long, value_parser = parse_angle)]
    y: Option<f64>,
    /// Switching crash time for a1-combined; solved from alpha when omitted.
    #[arg(long, value_parser = parse_angle)]
    wbar: Option<f64>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct CrashArgs {
    /// Crash time, or `never`.
    #[arg(long, value_parser = parse_crash_time)]
    w: Option<CrashTime>,
    /// Same as `--w never`.
    #[arg(long)]
    no_fault: bool,
}

impl CrashArgs {
    fn crash_time(&self) -> CrashTime {
        if self.no_fault {
            CrashTime::Never
        } else {
            self.w.unwrap_or(CrashTime::Never)
        }
    }
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[command(flatten)]
    strategy: StrategyArgs,
    #[command(flatten)]
    crash: CrashArgs,
    /// Exit position: counter-clockwise arc from the faulty robot's landing point.
    #[arg(long, value_parser = parse_angle)]
    x: f64,
    #[arg(long, value_enum, default_value = "r1")]
    faulty: Faulty,
    /// How the A2 survivor reacts to a crash before the exit is known.
    #[arg(long, value_enum, default_value = "after-own-arc")]
    pickup: Pickup,
    /// Include the full trajectories.
    #[arg(long)]
    trajectories: bool,
}

#[derive(Debug, Args)]
struct WorstCaseArgs {
    #[command(flatten)]
    strategy: StrategyArgs,
    #[command(flatten)]
    crash: CrashArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    /// Exit-search grid size.
    #[arg(long, default_value_t = 2048)]
    resolution: usize,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    /// Comma-separated chauffeuring costs.
    #[arg(long, value_delimiter = ',', value_parser = parse_angle, default_value = "1,1.30346,1.5,2")]
    alpha: Vec<f64>,
    #[arg(long, value_parser = parse_angle, default_value = "0")]
    w_start: f64,
    #[arg(long, value_parser = parse_angle, default_value = "2pi+1")]
    w_end: f64,
    #[arg(long, value_parser = parse_angle, default_value = "pi/120")]
    w_step: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Comma-separated chauffeuring costs.
    #[arg(long, value_delimiter = ',', value_parser = parse_angle, default_value = "1,1.30346,1.5,2")]
    alpha: Vec<f64>,
    #[arg(long, value_parser = parse_angle, default_value = "0")]
    w_start: f64,
    #[arg(long, value_parser = parse_angle, default_value = "2pi+1")]
    w_end: f64,
    #[arg(long, value_parser = parse_angle, default_value = "pi/120")]
    w_step: f64,
    #[arg(long, value_parser = parse_angle, default_value = "0")]
    zeta_start: f64,
    #[arg(long, value_parser = parse_angle, default_value = "pi")]
    zeta_end: f64,
    #[arg(long, value_parser = parse_angle, default_value = "pi/600")]
    zeta_step: f64,
    /// Exit-search grid size.
    #[arg(long, default_value_t = 2048)]
    resolution: usize,
    /// Golden-section refinement tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Also emit the best separation per cell.
    #[arg(long)]
    best_zeta: bool,
    /// Worker threads; all cores by default.
    #[arg(long)]
    jobs: Option<usize>,
    /// CSV destination; relative paths go under $EVAC_OUTPUT_DIR when set.
    /// Without it the CSV goes to stdout, or to sweep.csv in $EVAC_OUTPUT_DIR.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CrossoversArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Scenarios per formula.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    #[arg(long, value_enum, default_value = "text")]
    format: ReportFormat,
}

/// Failure of one CLI invocation, carrying its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Deadlock { .. } | Error::TimeCap { .. } | Error::Internal(_) => {
                CliError::Internal(e.to_string())
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Usage(format!("cannot write {}: {e}", path.display()))
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Internal(format!("cannot write output: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Internal(e.to_string()))
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Evaluate(a) => evaluate(a, out),
        Command::WorstCase(a) => worst(a, out),
        Command::Bounds(a) => bounds(a, out),
        Command::Sweep(a) => run_sweep(a, out),
        Command::Crossovers(a) => crossovers(a, out),
        Command::Validate(a) => validate(a, out),
    }
}

/// Concrete strategy for the given arguments; `a1` resolves through the
/// worst case at `w`.
fn resolve_strategy(args: &StrategyArgs, w: CrashTime, opts: &SearchOptions) -> Result<Strategy, CliError> {
    let need = |what: Option<f64>, flag: &str| {
        what.ok_or_else(|| CliError::Usage(format!("--strategy {:?} needs --{flag}", args.strategy)))
    };
    Ok(match args.strategy {
        StrategyName::A0 => Strategy::A0,
        StrategyName::A1Together => Strategy::A1Together,
        StrategyName::A1Alone => Strategy::A1Alone,
        StrategyName::A1Combined => Strategy::A1Combined {
            wbar: match args.wbar {
                Some(wbar) => wbar,
                None => solve_wbar(args.alpha)?,
            },
        },
        StrategyName::A1Delayed => Strategy::A1Delayed { y: need(args.y, "y")? },
        StrategyName::A2 => Strategy::A2 {
            zeta: need(args.zeta, "zeta")?,
        },
        StrategyName::A1 => {
            let id = a1_best_worst_case(args.alpha, w, opts)?.strategy_id;
            match id.as_str() {
                "a1-together" => Strategy::A1Together,
                "a1-alone" => Strategy::A1Alone,
                _ => Strategy::A1Combined {
                    wbar: solve_wbar(args.alpha)?,
                },
            }
        }
    })
}

fn evaluate(a: EvaluateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let w = a.crash.crash_time();
    let strategy = resolve_strategy(&a.strategy, w, &SearchOptions::default())?;
    let faulty = match a.faulty {
        Faulty::R1 => RobotId::R1,
        Faulty::R2 => RobotId::R2,
    };
    let pickup = match a.pickup {
        Pickup::AfterOwnArc => A2Pickup::AfterOwnArc,
        Pickup::Immediate => A2Pickup::Immediate,
    };
    let scenario = validate_scenario(Scenario::new(
        FaultModel::new(a.strategy.alpha, w, faulty),
        ExitPlacement::new(a.x),
        strategy.params(),
    ))?;
    let outcome = simulate(&MotionProgram::new(strategy).with_pickup(pickup), &scenario)?;
    let formula = match pickup {
        A2Pickup::AfterOwnArc => Some(evacuation_time(&strategy, &scenario.fault, a.x)?),
        A2Pickup::Immediate => None,
    };
    let mut report = json!({
        "strategy": strategy,
        "scenario": scenario,
        "evac_time": outcome.evac_time,
        "formula_time": formula,
        "exit_found_time": outcome.exit_found_time,
        "crash_detected_time": outcome.crash_detected_time,
        "event_log": outcome.event_log,
    });
    if matches!(strategy, Strategy::A2 { .. }) && pickup == A2Pickup::AfterOwnArc {
        report["a2_case"] = json!(a2_case(&outcome));
    }
    if a.trajectories {
        report["trajectories"] = json!(outcome.trajectories);
    }
    write_out(out, &to_json(&report)?)
}

fn record_row(r: &WorstCaseRecord) -> Result<SweepRow, CliError> {
    Ok(SweepRow {
        strategy: r.strategy_id.as_str().to_string(),
        alpha: r.alpha,
        w: r.w,
        zeta: r.zeta,
        worst_x: Some(r.worst_x),
        worst_time: r.worst_time,
        lower_bound: lower_bound(r.alpha, r.w)?.value,
        supremum: r.supremum,
    })
}

fn worst(a: WorstCaseArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let opts = SearchOptions {
        resolution: a.resolution,
        ..SearchOptions::default()
    };
    if opts.resolution < 3 {
        return Err(CliError::Validation("--resolution must be at least 3".into()));
    }
    let w = a.crash.crash_time();
    let record = match a.strategy.strategy {
        StrategyName::A1 => {
            FaultModel::new(a.strategy.alpha, w, RobotId::R1).validate()?;
            a1_best_worst_case(a.strategy.alpha, w, &opts)?
        }
        _ => {
            let strategy = resolve_strategy(&a.strategy, w, &opts)?;
            worst_case(&strategy, a.strategy.alpha, w, &opts)?
        }
    };
    let text = match a.format {
        OutputFormat::Json => {
            let mut v = json!(record);
            v["lower_bound"] = json!(lower_bound(record.alpha, record.w)?.value);
            to_json(&v)?
        }
        OutputFormat::Csv => csv_table(&[record_row(&record)?]),
    };
    write_out(out, &text)
}

fn bounds(a: BoundsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = SweepSpec {
        alpha_values: a.alpha.clone(),
        w_start: a.w_start,
        w_end: a.w_end,
        w_step: a.w_step,
        ..SweepSpec::default()
    };
    spec.validate()?;
    let mut rows = Vec::new();
    for &alpha in &a.alpha {
        for w in spec.w_grid() {
            let b = lower_bound(alpha, CrashTime::At(w))?;
            rows.push((alpha, w, b));
        }
    }
    let text = match a.format {
        OutputFormat::Csv => {
            let mut s = String::from("alpha,w,lower_bound,active_case,t_star\n");
            for (alpha, w, b) in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    fmt_num(*alpha),
                    fmt_num(*w),
                    fmt_num(b.value),
                    b.active_case.as_str(),
                    b.t_star.map(fmt_num).unwrap_or_default()
                ));
            }
            s
        }
        OutputFormat::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|(alpha, w, b)| {
                    json!({
                        "alpha": alpha,
                        "w": w,
                        "lower_bound": b.value,
                        "active_case": b.active_case,
                        "t_star": b.t_star,
                    })
                })
                .collect();
            to_json(&v)?
        }
    };
    write_out(out, &text)
}

fn output_path(requested: Option<PathBuf>) -> Option<PathBuf> {
    let dir = std::env::var_os(OUTPUT_DIR_VAR).map(PathBuf::from);
    match (requested, dir) {
        (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
        (Some(p), _) => Some(p),
        (None, Some(dir)) => Some(dir.join("sweep.csv")),
        (None, None) => None,
    }
}

fn sidecar_path(csv: &Path) -> PathBuf {
    let mut name = csv.file_name().map(OsString::from).unwrap_or_default();
    name.push(".meta.json");
    csv.with_file_name(name)
}

fn run_sweep(a: SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = SweepSpec {
        alpha_values: a.alpha,
        w_start: a.w_start,
        w_end: a.w_end,
        w_step: a.w_step,
        zeta_start: a.zeta_start,
        zeta_end: a.zeta_end,
        zeta_step: a.zeta_step,
        search: SearchOptions {
            resolution: a.resolution,
            tolerance: a.tolerance,
        },
        zeta_rows: true,
        best_zeta: a.best_zeta,
    };
    spec.validate()?;
    if a.jobs == Some(0) {
        return Err(CliError::Validation("--jobs must be at least 1".into()));
    }
    let path = output_path(a.output);
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let rows = pool.install(|| sweep(&spec))?;
    let csv = csv_table(&rows);
    let Some(path) = path else {
        return write_out(out, &csv);
    };
    std::fs::write(&path, csv).map_err(io_err(&path))?;
    let wbar: Vec<_> = spec
        .alpha_values
        .iter()
        .filter_map(|&alpha| solve_wbar(alpha).ok().map(|w| json!({ "alpha": alpha, "wbar": w })))
        .collect();
    let meta = json!({
        "spec": spec,
        "rows": rows.len(),
        "threads": pool.current_num_threads(),
        "elapsed_seconds": started.elapsed().as_secs_f64(),
        "crossover_alpha": crossover_alpha(),
        "wbar_root": "smallest root in (1, 1 + pi]",
        "wbar": wbar,
        "version": env!("CARGO_PKG_VERSION"),
    });
    let meta_path = sidecar_path(&path);
    std::fs::write(&meta_path, to_json(&meta)?).map_err(io_err(&meta_path))?;
    writeln!(out, "wrote {} rows to {}", rows.len(), path.display())
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn wbar_table() -> Vec<(f64, Option<f64>)> {
    (0..=6)
        .map(|k| {
            let alpha = 1.0 + 0.05 * k as f64;
            (alpha, solve_wbar(alpha).ok())
        })
        .collect()
}

fn crossovers(a: CrossoversArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let alpha_star = crossover_alpha();
    let zeta_c = coincidence_zeta();
    let chord = a2_meeting_chord(zeta_c)?;
    let table = wbar_table();
    let text = match a.format {
        ReportFormat::Text => {
            let mut s = format!(
                "alpha_star {}\nzeta_coincidence {}\nmeeting_chord_at_coincidence {}\nalpha,wbar\n",
                fmt_num(alpha_star),
                fmt_num(zeta_c),
                fmt_num(chord)
            );
            for (alpha, wbar) in &table {
                let w = wbar.map(fmt_num).unwrap_or_else(|| "none".into());
                s.push_str(&format!("{},{w}\n", fmt_num(*alpha)));
            }
            s
        }
        ReportFormat::Json => to_json(&json!({
            "alpha_star": alpha_star,
            "zeta_coincidence": zeta_c,
            "meeting_chord_at_coincidence": chord,
            "wbar": table
                .iter()
                .map(|(alpha, w)| json!({ "alpha": alpha, "wbar": w }))
                .collect::<Vec<_>>(),
        }))?,
    };
    write_out(out, &text)
}

fn validate(a: ValidateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.samples == 0 || !(a.tolerance > 0.0) {
        return Err(CliError::Validation("--samples and --tolerance must be positive".into()));
    }
    let cfg = ValidationConfig {
        samples: a.samples,
        seed: a.seed,
        tolerance: a.tolerance,
    };
    let report = run_validation(&cfg)?;
    let text = match a.format {
        ReportFormat::Json => to_json(&report)?,
        ReportFormat::Text => {
            let mut s = String::new();
            for c in &report.checks {
                s.push_str(&format!(
                    "{:<14} samples {:>6}  max_error {:.3e}  mismatches {:>5}  {}\n",
                    c.name,
                    c.samples,
                    c.max_error,
                    c.mismatches,
                    if c.passed() { "ok" } else { "FAIL" }
                ));
                if let Some(m) = &c.first_mismatch {
                    s.push_str(&format!("    first mismatch: {m}\n"));
                }
            }
            let p = &report.fetch_first_as_printed;
            s.push_str(&format!(
                "z22 as printed (alpha(x - w - 1)) vs simulated: {} samples, max |difference| {}, \
                 (simulated - printed)/alpha = 2 within {:.3e}\n",
                p.samples,
                fmt_num(p.max_abs_difference),
                p.max_offset_deviation
            ));
            s
        }
    };
    write_out(out, &text)?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Validation("closed forms disagree with the simulator".into()))
    }
}
