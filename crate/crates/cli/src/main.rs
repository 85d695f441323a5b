//! `logic-epp`: runs the purification protocols and writes plot-ready
//! JSON or CSV.
//!
//! Exit codes: 0 on success, 1 for rejected input (including bad flags),
//! 2 when the simulator reports an internal invariant violation.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use logic_epp::analysis::{
    monte_carlo_run, reflection_scan, reflection_scan_to_csv, sensitivity_sweep, MonteCarloSpec, SweepSpec,
    SweepVariable,
};
use logic_epp::epp::{
    build_wiring, check_reference_patterns, iterate_epp, locate_physical_bitflip, mode_label, pattern_string,
    run_bitflip_epp_with, run_phaseflip_correction, EppOptions, Protocol, Schedule,
};
use logic_epp::faraday::Absorption;
use logic_epp::logic_states::{error_state, logic_bell_state, ErrorKind, ErrorModel, LogicBellKind};
use logic_epp::numfmt::fmt_sig;
use logic_epp::state_io::StateDocument;
use logic_epp::{Error, State};

const OUT_DIR_ENV: &str = "LOGIC_EPP_OUT_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "logic-epp",
    version,
    about = "Logic Bell state purification with photonic Faraday rotation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Output file. Relative paths resolve against $LOGIC_EPP_OUT_DIR when
    /// it is set; without this flag output goes to stdout, or to
    /// `<command>.<format>` in that directory.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Maximum number of worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bit-flip purification of two copies; `--trials` switches to sampling.
    Purify(PurifyArgs),
    /// Deterministic logic phase-flip detection and correction.
    PhaseCorrect(PhaseArgs),
    /// Locates a single physical bit flip on logic qubit A.
    LocateFlip(LocateArgs),
    /// Fidelity recursion over several purification rounds.
    Iterate(IterateArgs),
    /// Reruns a protocol with cavity-derived phases across a grid.
    Sweep(SweepArgs),
    /// Reflection amplitudes of the coupled and empty cavity.
    ReflectionScan(ScanArgs),
    /// Prints a logic Bell state or an error state term by term.
    DumpState(DumpArgs),
    /// Checks the verdict rule against the reference pattern tables.
    VerifyPatterns(VerifyArgs),
}

#[derive(Args, Debug)]
struct PurifyArgs {
    #[arg(long = "F")]
    f: f64,
    #[arg(long = "M")]
    m: usize,
    #[arg(long, default_value = "logic-bit-flip")]
    model: ErrorKind,
    #[arg(long, value_enum, default_value_t = ScheduleArg::GroupLocal)]
    schedule: ScheduleArg,
    #[command(flatten)]
    sampling: Sampling,
}

#[derive(Args, Debug)]
struct PhaseArgs {
    #[arg(long = "F")]
    f: f64,
    #[arg(long = "M")]
    m: usize,
    #[command(flatten)]
    sampling: Sampling,
}

#[derive(Args, Debug)]
struct Sampling {
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScheduleArg {
    GroupLocal,
    Literal,
}

#[derive(Args, Debug)]
struct LocateArgs {
    #[arg(long = "M")]
    m: usize,
    /// 1-based flipped photon of A; omit for an error-free input.
    #[arg(long)]
    position: Option<usize>,
}

#[derive(Args, Debug)]
struct IterateArgs {
    #[arg(long = "F")]
    f: f64,
    #[arg(long = "M", default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 3)]
    rounds: usize,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Comma-separated, strictly increasing values.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with_all = ["from", "to", "steps"])]
    grid: Vec<f64>,
    #[arg(long, allow_negative_numbers = true, requires_all = ["to", "steps"])]
    from: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    to: Option<f64>,
    /// Number of points including both ends.
    #[arg(long)]
    steps: Option<usize>,
}

impl GridArgs {
    fn values(&self) -> Result<Vec<f64>, Error> {
        match (self.from, self.to, self.steps) {
            (Some(a), Some(b), Some(n)) => {
                if n < 2 {
                    return Err(Error::InvalidInput("--steps must be at least 2".into()));
                }
                let h = (b - a) / (n - 1) as f64;
                Ok((0..n).map(|k| if k == n - 1 { b } else { a + h * k as f64 }).collect())
            }
            _ => Ok(self.grid.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariableArg {
    #[value(name = "F")]
    F,
    GammaOverKappa,
    LambdaOverKappa,
    Detuning,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum)]
    variable: VariableArg,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value = "bit-flip-epp")]
    protocol: Protocol,
    #[arg(long = "M", default_value_t = 2)]
    m: usize,
    #[arg(long, default_value = "logic-bit-flip")]
    model: ErrorKind,
    #[arg(long = "F", default_value_t = 0.8)]
    f: f64,
    #[arg(long, default_value_t = 0.0)]
    gamma_over_kappa: f64,
    #[arg(long, default_value_t = 0.5)]
    lambda_over_kappa: f64,
    #[arg(long, default_value_t = -0.5, allow_negative_numbers = true)]
    detuning: f64,
    /// Keep |r| < 1 instead of the pure-phase approximation.
    #[arg(long)]
    retain_modulus: bool,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long, default_value_t = 0.5)]
    lambda_over_kappa: f64,
    #[arg(long, default_value_t = 0.0)]
    gamma_over_kappa: f64,
    /// Comma-separated detunings `(ω_p − ω_c)/κ`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with_all = ["from", "to", "steps"])]
    detuning: Vec<f64>,
    #[arg(long, allow_negative_numbers = true, requires_all = ["to", "steps"])]
    from: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    to: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Args, Debug)]
struct DumpArgs {
    #[arg(long = "M")]
    m: usize,
    /// Logic Bell state: phi+, phi-, psi+ or psi-.
    #[arg(long, conflicts_with = "model")]
    state: Option<String>,
    /// Error state of this model, e.g. `physical-bit-flip:2`.
    #[arg(long)]
    model: Option<ErrorKind>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long = "M")]
    m: usize,
}

/// Failure of a command, already mapped to its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_internal() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

fn io_failure(e: std::io::Error, what: &str) -> Failure {
    Failure {
        code: 1,
        message: format!("{what}: {e}"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            if matches!(
                e.kind(),
                K::DisplayHelp | K::DisplayVersion | K::DisplayHelpOnMissingArgumentOrSubcommand
            ) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            // Keep everything above clap's usage block on one line.
            let text = e.to_string();
            let line: Vec<&str> = text
                .lines()
                .take_while(|l| !l.starts_with("Usage:"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            eprintln!("logic-epp: {}", line.join(" ").trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("logic-epp: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidInput("--threads must be positive".into()).into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure {
                code: 1,
                message: format!("thread pool: {e}"),
            })?;
    }
    let (name, mut text) = render(cli)?;
    if !text.ends_with('\n') {
        text.push('\n');
    }
    emit(cli, name, &text)
}

fn check_cli_fidelity(f: f64) -> Result<(), Error> {
    if !(f > 0.0 && f <= 1.0) {
        return Err(Error::InvalidInput(format!("--F {f} outside (0, 1]")));
    }
    Ok(())
}

fn render(cli: &Cli) -> Result<(&'static str, String), Failure> {
    let fmt = cli.format;
    let out = match &cli.command {
        Command::Purify(a) => {
            check_cli_fidelity(a.f)?;
            if let Some(trials) = a.sampling.trials {
                let mut spec = MonteCarloSpec::new(Protocol::BitFlipEpp, a.f, a.m, trials, a.sampling.seed);
                spec.kind = a.model;
                let est = monte_carlo_run(&spec)?;
                (
                    "purify",
                    if fmt == Format::Json {
                        est.to_json()
                    } else {
                        est.to_csv()?
                    },
                )
            } else {
                let schedule = match a.schedule {
                    ScheduleArg::GroupLocal => Schedule::GroupLocal,
                    ScheduleArg::Literal => Schedule::Literal,
                };
                let opts = EppOptions {
                    schedule,
                    ..EppOptions::default()
                };
                let report = run_bitflip_epp_with(&ErrorModel::new(a.model, a.f)?, a.m, &opts)?;
                (
                    "purify",
                    if fmt == Format::Json {
                        report.to_json()
                    } else {
                        report.to_csv()?
                    },
                )
            }
        }
        Command::PhaseCorrect(a) => {
            check_cli_fidelity(a.f)?;
            if let Some(trials) = a.sampling.trials {
                let spec = MonteCarloSpec::new(Protocol::PhaseFlipDetect, a.f, a.m, trials, a.sampling.seed);
                let est = monte_carlo_run(&spec)?;
                (
                    "phase-correct",
                    if fmt == Format::Json {
                        est.to_json()
                    } else {
                        est.to_csv()?
                    },
                )
            } else {
                let report = run_phaseflip_correction(a.f, a.m)?;
                (
                    "phase-correct",
                    if fmt == Format::Json {
                        report.to_json()
                    } else {
                        report.to_csv()?
                    },
                )
            }
        }
        Command::LocateFlip(a) => ("locate-flip", locate(a, fmt)?),
        Command::Iterate(a) => ("iterate", iterate(a, fmt)?),
        Command::Sweep(a) => ("sweep", sweep(a, fmt)?),
        Command::ReflectionScan(a) => ("reflection-scan", scan(a, fmt)?),
        Command::DumpState(a) => ("dump-state", dump(a, fmt)?),
        Command::VerifyPatterns(a) => return verify(a, fmt).map(|t| ("verify-patterns", t)),
    };
    Ok(out)
}

fn emit(cli: &Cli, name: &str, text: &str) -> Result<(), Failure> {
    let dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    let path = match (&cli.output, dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.clone()),
        (None, Some(d)) => Some(d.join(format!("{name}.{}", cli.format.extension()))),
        (None, None) => None,
    };
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|e| io_failure(e, &parent.display().to_string()))?;
            }
            fs::write(&p, text).map_err(|e| io_failure(e, &p.display().to_string()))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| io_failure(e, "stdout")),
    }
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String, Failure> {
    let bytes = w.into_inner().map_err(|e| Failure {
        code: 1,
        message: e.to_string(),
    })?;
    String::from_utf8(bytes).map_err(|e| Failure {
        code: 1,
        message: e.to_string(),
    })
}

fn csv_fail(e: csv::Error) -> Failure {
    Failure {
        code: 1,
        message: format!("csv: {e}"),
    }
}

fn pretty(value: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("plain data serializes");
    s.push('\n');
    s
}

fn locate(a: &LocateArgs, fmt: Format) -> Result<String, Failure> {
    let input: State = match a.position {
        Some(position) => error_state(ErrorKind::PhysicalBitFlip { position }, a.m)?,
        None => logic_bell_state(LogicBellKind::PhiPlus, a.m)?,
    };
    let loc = locate_physical_bitflip(&input, a.m)?;
    let target: State = logic_bell_state(LogicBellKind::PhiPlus, a.m)?;
    let fidelity = loc.corrected.overlap(&target)?;
    let checks: Vec<String> = loc
        .checks
        .iter()
        .map(|&(x, y)| format!("{}-{}", mode_label(a.m, x), mode_label(a.m, y)))
        .collect();
    let found = loc
        .position
        .map(|k| mode_label(a.m, k - 1))
        .unwrap_or_else(|| "none".into());
    Ok(match fmt {
        Format::Json => pretty(serde_json::json!({
            "M": a.m,
            "position": found,
            "atoms_used": loc.atoms_used,
            "checks": checks,
            "outcomes": pattern_string(&loc.outcomes),
            "fidelity": fmt_sig(fidelity),
        })),
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["M", "position", "atoms_used", "checks", "outcomes", "fidelity"])
                .map_err(csv_fail)?;
            w.write_record([
                a.m.to_string(),
                found,
                loc.atoms_used.to_string(),
                checks.join(" "),
                pattern_string(&loc.outcomes),
                fmt_sig(fidelity),
            ])
            .map_err(csv_fail)?;
            finish_csv(w)?
        }
    })
}

fn iterate(a: &IterateArgs, fmt: Format) -> Result<String, Failure> {
    check_cli_fidelity(a.f)?;
    let rows = iterate_epp(a.f, a.rounds, a.m)?;
    Ok(match fmt {
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "round": r.round,
                        "fidelity": fmt_sig(r.fidelity),
                        "success_probability": fmt_sig(r.success_probability),
                        "cumulative_yield": fmt_sig(r.cumulative_yield),
                    })
                })
                .collect();
            pretty(serde_json::json!({ "F": fmt_sig(a.f), "M": a.m, "rounds": rows }))
        }
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["round", "fidelity", "success_probability", "cumulative_yield"])
                .map_err(csv_fail)?;
            for r in &rows {
                w.write_record([
                    r.round.to_string(),
                    fmt_sig(r.fidelity),
                    fmt_sig(r.success_probability),
                    fmt_sig(r.cumulative_yield),
                ])
                .map_err(csv_fail)?;
            }
            finish_csv(w)?
        }
    })
}

fn sweep(a: &SweepArgs, fmt: Format) -> Result<String, Failure> {
    let variable = match a.variable {
        VariableArg::F => SweepVariable::Fidelity,
        VariableArg::GammaOverKappa => SweepVariable::GammaOverKappa,
        VariableArg::LambdaOverKappa => SweepVariable::LambdaOverKappa,
        VariableArg::Detuning => SweepVariable::Detuning,
    };
    let mut spec = SweepSpec::new(variable, a.grid.values()?, a.protocol, a.m);
    spec.kind = a.model;
    spec.fixed.fidelity = a.f;
    spec.fixed.gamma_over_kappa = a.gamma_over_kappa;
    spec.fixed.lambda_over_kappa = a.lambda_over_kappa;
    spec.fixed.detuning = a.detuning;
    if a.retain_modulus {
        spec.absorption = Absorption::RetainModulus;
    }
    let result = sensitivity_sweep(&spec)?;
    Ok(match fmt {
        Format::Json => result.to_json(),
        Format::Csv => result.to_csv()?,
    })
}

fn scan(a: &ScanArgs, fmt: Format) -> Result<String, Failure> {
    let grid = GridArgs {
        grid: a.detuning.clone(),
        from: a.from,
        to: a.to,
        steps: a.steps,
    }
    .values()?;
    if grid.is_empty() {
        return Err(Error::InvalidInput("give --detuning or --from/--to/--steps".into()).into());
    }
    let rows = reflection_scan(&grid, a.lambda_over_kappa, a.gamma_over_kappa);
    Ok(match fmt {
        Format::Json => {
            let s = |x: Option<f64>| x.map(fmt_sig);
            let rows: Vec<_> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "detuning": fmt_sig(r.detuning),
                        "r_abs": s(r.r_abs),
                        "theta": s(r.theta),
                        "r0_abs": s(r.r0_abs),
                        "theta0": s(r.theta0),
                        "status": r.status,
                    })
                })
                .collect();
            pretty(serde_json::json!({
                "lambda_over_kappa": fmt_sig(a.lambda_over_kappa),
                "gamma_over_kappa": fmt_sig(a.gamma_over_kappa),
                "rows": rows,
            }))
        }
        Format::Csv => reflection_scan_to_csv(&rows)?,
    })
}

fn dump(a: &DumpArgs, fmt: Format) -> Result<String, Failure> {
    let state: State = match (&a.state, a.model) {
        (_, Some(kind)) => error_state(kind, a.m)?,
        (name, None) => {
            let name = name.as_deref().unwrap_or("phi+");
            let kind = match name.to_ascii_lowercase().as_str() {
                "phi+" => LogicBellKind::PhiPlus,
                "phi-" => LogicBellKind::PhiMinus,
                "psi+" => LogicBellKind::PsiPlus,
                "psi-" => LogicBellKind::PsiMinus,
                _ => return Err(Error::InvalidInput(format!("unknown logic Bell state {name:?}")).into()),
            };
            logic_bell_state(kind, a.m)?
        }
    };
    let doc = StateDocument::from_state(&state);
    Ok(match fmt {
        Format::Json => doc.to_json(),
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["basis", "re", "im"]).map_err(csv_fail)?;
            for t in &doc.terms {
                w.write_record([t.basis.clone(), fmt_sig(t.amplitude[0]), fmt_sig(t.amplitude[1])])
                    .map_err(csv_fail)?;
            }
            finish_csv(w)?
        }
    })
}

/// A mismatch against the reference table is reported as an internal error.
fn verify(a: &VerifyArgs, fmt: Format) -> Result<String, Failure> {
    let plan = build_wiring(a.m, Protocol::BitFlipEpp)?;
    let checks = check_reference_patterns(a.m, &plan)?;
    let passed = checks.iter().all(|c| c.passed());
    let verdict = if passed { "PASS" } else { "FAIL" };
    let text = match fmt {
        Format::Json => {
            let rows: Vec<_> = checks
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "pattern": c.pattern,
                        "expected": c.expected.to_string(),
                        "got": c.got.to_string(),
                        "result": if c.passed() { "PASS" } else { "FAIL" },
                    })
                })
                .collect();
            pretty(serde_json::json!({ "M": a.m, "result": verdict, "patterns": rows }))
        }
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(["pattern", "expected", "got", "result"])
                .map_err(csv_fail)?;
            for c in &checks {
                w.write_record([
                    c.pattern.clone(),
                    c.expected.to_string(),
                    c.got.to_string(),
                    (if c.passed() { "PASS" } else { "FAIL" }).to_string(),
                ])
                .map_err(csv_fail)?;
            }
            finish_csv(w)?
        }
    };
    if passed {
        Ok(text)
    } else {
        let mismatches = checks.iter().filter(|c| !c.passed()).count();
        Err(Failure {
            code: 2,
            message: format!("{mismatches} pattern(s) disagree with the reference table"),
        })
    }
}
