//! `redcap-dim`: scenario-driven front end for the RedCap dimensioning
//! models.
//!
//! Exit codes: 0 on success, 1 for analysis and I/O failures, 2 for scenario
//! and usage errors. Failures are reported on stderr as one JSON object;
//! reports go to stdout or to files, never to stderr.

pub mod commands;
pub mod format;
pub mod scenario;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use commands::{AccessArgs, Artifact, BatteryArgs, BwpArgs, CapacityArgs, Ctx, DatarateArgs, LinkbudgetArgs, ReportArgs};
use scenario::{parse_scenario, ErrorClass, OutputFormat, ScenarioError};

pub use scenario::{Parsed, ScenarioFile};

/// Seed fallback when neither a flag nor the scenario file sets one.
pub const SEED_ENV: &str = "REDCAP_DIM_SEED";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("scenario errors: {0:?}")]
    Scenario(Vec<ScenarioError>),
    #[error("{0}")]
    Analysis(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Scenario(_) => 2,
            CliError::Analysis(_) | CliError::Io(_) => 1,
        }
    }

    fn records(&self) -> Vec<ScenarioError> {
        match self {
            CliError::Scenario(v) => v.clone(),
            CliError::Analysis(m) => vec![ScenarioError::new(ErrorClass::Analysis, m.clone())],
            CliError::Io(m) => vec![ScenarioError::new(ErrorClass::Io, m.clone())],
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "redcap-dim", version, about = "Dimensioning and coexistence analysis for NR RedCap devices")]
pub struct Cli {
    /// Scenario file (JSON).
    #[arg(long, short, global = true)]
    pub scenario: Option<PathBuf>,
    /// Report format; overrides `output.format`.
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,
    /// Directory for report files; overrides `output.path`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for stochastic analyses; beats the file and the environment.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Peak DL/UL rate per profile, carrier and direction.
    Datarate(DatarateArgs),
    /// Battery lifetime over the DRX cycle × inter-arrival grid.
    Battery(BatteryArgs),
    /// Per-channel MIL and coverage recovery against the reference device.
    Linkbudget(LinkbudgetArgs),
    /// Initial BWP layout with the least PUSCH fragmentation.
    Bwp(BwpArgs),
    /// Random access with RedCap identification.
    AccessSim(AccessArgs),
    /// Multi-cell eMBB throughput with a RedCap share.
    CapacitySim(CapacityArgs),
    /// Every applicable analysis plus use-case verdicts, as one JSON summary.
    Report(ReportArgs),
    /// The scenario with every default written out.
    Export,
    /// Built-in profiles, requirements and deployments.
    Presets,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Datarate(_) => "datarate",
            Command::Battery(_) => "battery",
            Command::Linkbudget(_) => "linkbudget",
            Command::Bwp(_) => "bwp",
            Command::AccessSim(_) => "access-sim",
            Command::CapacitySim(_) => "capacity-sim",
            Command::Report(_) => "report",
            Command::Export => "export",
            Command::Presets => "presets",
        }
    }
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    subcommand: Option<&'a str>,
    errors: Vec<ScenarioError>,
}

fn write_error(stderr: &mut dyn Write, subcommand: Option<&str>, errors: Vec<ScenarioError>) {
    let doc = ErrorReport { subcommand, errors };
    let _ = writeln!(stderr, "{}", serde_json::to_string(&doc).expect("errors serialize"));
}

/// Reads and parses a scenario file.
pub fn load_scenario(path: &Path) -> Result<Parsed, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::Scenario(vec![ScenarioError::new(ErrorClass::Io, format!("{}: {e}", path.display()))])
    })?;
    parse_scenario(&text).map_err(CliError::Scenario)
}

fn env_seed(value: Option<String>) -> Result<Option<u64>, CliError> {
    match value {
        None => Ok(None),
        Some(v) => v.trim().parse().map(Some).map_err(|_| {
            CliError::Scenario(vec![ScenarioError::new(
                ErrorClass::Invariant,
                format!("{SEED_ENV}={v:?} is not an unsigned integer"),
            )])
        }),
    }
}

fn execute(cli: &Cli, env_seed_value: Option<String>) -> Result<(Vec<Artifact>, Option<PathBuf>), CliError> {
    if let Command::Presets = cli.command {
        return Ok((vec![Artifact { file: "presets.json".into(), contents: commands::presets(), stdout: true }], cli.out.clone()));
    }
    let path = cli.scenario.as_ref().ok_or_else(|| {
        CliError::Scenario(vec![ScenarioError::new(ErrorClass::Usage, "--scenario is required")])
    })?;
    let parsed = load_scenario(path)?;
    let scn = &parsed.scenario;
    let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let seed = match cli.seed.or(scn.seed) {
        Some(s) => Some(s),
        None => env_seed(env_seed_value)?,
    };
    let out_dir = cli.out.clone().or_else(|| scn.output.path.as_ref().map(|p| base_dir.join(p)));
    let ctx = Ctx {
        scenario: scn,
        defaulted: &parsed.defaulted,
        format: cli.format.unwrap_or(scn.output.format),
        seed,
        base_dir,
    };
    let artifacts = match &cli.command {
        Command::Datarate(a) => commands::datarate(&ctx, a)?,
        Command::Battery(a) => commands::battery(&ctx, a)?,
        Command::Linkbudget(a) => commands::linkbudget(&ctx, a)?,
        Command::Bwp(a) => commands::bwp(&ctx, a)?,
        Command::AccessSim(a) => commands::access_sim(&ctx, a)?,
        Command::CapacitySim(a) => commands::capacity_sim(&ctx, a)?,
        Command::Report(a) => commands::report(&ctx, a)?,
        Command::Export => vec![Artifact { file: "scenario.json".into(), contents: scn.to_text(), stdout: true }],
        Command::Presets => unreachable!("handled above"),
    };
    Ok((artifacts, out_dir))
}

fn emit(artifacts: &[Artifact], out_dir: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
            for a in artifacts {
                let path = dir.join(&a.file);
                std::fs::write(&path, &a.contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                writeln!(stdout, "{}", path.display()).map_err(io)?;
            }
        }
        None => {
            for a in artifacts.iter().filter(|a| a.stdout) {
                stdout.write_all(a.contents.as_bytes()).map_err(io)?;
            }
        }
    }
    Ok(())
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with_env(args, std::env::var(SEED_ENV).ok(), stdout, stderr)
}

/// [`run`] with the seed environment variable passed in explicitly.
pub fn run_with_env<I, T>(args: I, env_seed_value: Option<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
        Err(e) => {
            write_error(stderr, None, vec![ScenarioError::new(ErrorClass::Usage, e.to_string().trim_end())]);
            return 2;
        }
    };
    let name = cli.command.name();
    let result = execute(&cli, env_seed_value).and_then(|(a, dir)| emit(&a, dir.as_deref(), stdout));
    match result {
        Ok(()) => 0,
        Err(e) => {
            write_error(stderr, Some(name), e.records());
            e.exit_code()
        }
    }
}
