use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use transduction_lab::checks;
use transduction_lab::config::{parse_assignment, Axis, Direction, Format, SweepConfig};
use transduction_lab::presets::{list_presets, preset};
use transduction_lab::table::{format_value, write_table};
use transduction_lab::{evaluate_point, run_sweep, LabError, Result};

/// Quantum channel metrics of a cavity electro-optic transducer.
#[derive(Parser)]
#[command(name = "transduction-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the metrics over a parameter grid and write a table.
    Sweep(SweepArgs),
    /// List the figure presets.
    Presets,
    /// Evaluate one parameter set and print every metric.
    Point(PointArgs),
    /// Run the reproducibility checks.
    Check,
}

#[derive(Args)]
struct Common {
    /// TOML file with the sweep configuration.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Start from a named preset.
    #[arg(long)]
    preset: Option<String>,
    /// Fix a parameter, e.g. `--set c_g=0.5`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Signal direction: o2m or m2o.
    #[arg(long)]
    direction: Option<Direction>,
    /// Use squeezed-bath elimination of the amplified noise.
    #[arg(long)]
    eliminate_noise: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// Sweep axis `name:min:max:count[:log]`.
    #[arg(long, value_name = "SPEC")]
    grid: Vec<Axis>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json; defaults to the output extension, then csv.
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    common: Common,
}

fn base_config(c: &Common) -> Result<SweepConfig> {
    let mut cfg = match (&c.config, &c.preset) {
        (Some(_), Some(_)) => return Err(LabError::config("--config and --preset are mutually exclusive")),
        (Some(path), None) => SweepConfig::from_toml_file(path)?,
        (None, Some(name)) => preset(name)?,
        (None, None) => SweepConfig::default(),
    };
    for s in &c.set {
        let (k, v) = parse_assignment(s)?;
        cfg.set_fixed(&k, v)?;
    }
    if let Some(d) = c.direction {
        cfg.direction = d;
    }
    cfg.eliminate_noise |= c.eliminate_noise;
    Ok(cfg)
}

fn sweep(args: SweepArgs) -> Result<()> {
    let mut cfg = base_config(&args.common)?;
    for axis in args.grid {
        cfg.set_axis(axis);
    }
    if args.out.is_some() {
        cfg.out = args.out;
    }
    if let Some(f) = args.format {
        cfg.format = f;
    } else if let Some(f) = cfg.out.as_deref().and_then(Format::from_path) {
        cfg.format = f;
    }
    let table = run_sweep(&cfg)?;
    match &cfg.out {
        Some(path) => write_table(&table, path, cfg.format),
        None => emit(&table.to_bytes(cfg.format)),
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(bytes: &[u8]) -> Result<()> {
    match std::io::stdout().lock().write_all(bytes) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(LabError::Io { path: "<stdout>".into(), source: e }),
        _ => Ok(()),
    }
}

fn point(args: PointArgs) -> Result<()> {
    let cfg = base_config(&args.common)?;
    let mut text = String::new();
    for (name, value) in evaluate_point(&cfg)? {
        text += &format!("{name} = {}\n", value.map(format_value).unwrap_or_else(|| "-".into()));
    }
    emit(text.as_bytes())
}

fn check() -> Result<bool> {
    let results = checks::run_all();
    let text: String = results.iter().map(|r| format!("{r}\n")).collect();
    emit(text.as_bytes())?;
    Ok(results.iter().all(|r| r.passed))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Sweep(args) => sweep(args)?,
        Command::Presets => {
            let text: String = list_presets().iter().map(|p| format!("{:<8} {}\n", p.name, p.description)).collect();
            emit(text.as_bytes())?;
        }
        Command::Point(args) => point(args)?,
        Command::Check => {
            if !check()? {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
