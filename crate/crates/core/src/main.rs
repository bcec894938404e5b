use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use risuav::exp::{self, ExperimentKind, OutputFormat};

#[derive(Parser)]
#[command(
    name = "risuav",
    version,
    about = "Simulator and optimization toolkit for RIS-enabled UAV networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a configuration against the regulatory profile and the
    /// far-field assumptions; exits non-zero when violations are found.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the experiment defined in the configuration file.
    Run(RunArgs),
    /// Run the configured experiment with sweep axes overridden from the
    /// command line.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output file; defaults to the path named in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Master seed; overrides the config.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Experiment kind override: pathloss_sweep, flighttime_sweep, coverage,
    /// secrecy.
    #[arg(long)]
    kind: Option<String>,
    /// Element counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    elements: Option<Vec<usize>>,
    /// Carrier frequencies in GHz, comma separated.
    #[arg(long = "frequencies-ghz", value_delimiter = ',')]
    frequencies_ghz: Option<Vec<f64>>,
    /// Surface areas in m^2, comma separated.
    #[arg(long = "areas-m2", value_delimiter = ',')]
    areas_m2: Option<Vec<f64>>,
    /// UAV altitudes in meters, comma separated.
    #[arg(long = "altitudes-m", value_delimiter = ',')]
    altitudes_m: Option<Vec<f64>>,
    /// Reference SNRs in dB, comma separated.
    #[arg(long = "snrs-db", value_delimiter = ',')]
    snrs_db: Option<Vec<f64>>,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Validate { config } => validate(config),
        Command::Run(args) => run(args, None),
        Command::Sweep(args) => {
            let overrides = AxisOverrides {
                kind: args.kind,
                elements: args.elements,
                frequencies_ghz: args.frequencies_ghz,
                areas_m2: args.areas_m2,
                altitudes_m: args.altitudes_m,
                snrs_db: args.snrs_db,
            };
            run(args.run, Some(overrides))
        }
    }
}

struct AxisOverrides {
    kind: Option<String>,
    elements: Option<Vec<usize>>,
    frequencies_ghz: Option<Vec<f64>>,
    areas_m2: Option<Vec<f64>>,
    altitudes_m: Option<Vec<f64>>,
    snrs_db: Option<Vec<f64>>,
}

fn validate(config: PathBuf) -> ExitCode {
    let loaded = match exp::load_config(&config) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    println!(
        "config {} (hash {})",
        config.display(),
        loaded.config_hash
    );
    if !loaded.defaults_applied.is_empty() {
        println!("defaults applied:");
        for d in &loaded.defaults_applied {
            println!("  {d}");
        }
    }
    if loaded.violations.is_empty() {
        println!("scenario valid: no violations");
        ExitCode::SUCCESS
    } else {
        println!("violations:");
        for v in &loaded.violations {
            println!("  {v}");
        }
        ExitCode::from(2)
    }
}

fn run(args: RunArgs, overrides: Option<AxisOverrides>) -> ExitCode {
    let loaded = match exp::load_config(&args.config) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    for v in &loaded.violations {
        eprintln!("warning: {v}");
    }
    let Some(mut spec) = loaded.experiment else {
        eprintln!("error: {} has no [experiment] section", args.config.display());
        return ExitCode::from(1);
    };
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    if let Some(o) = overrides {
        if let Some(kind) = o.kind {
            spec.kind = match kind.as_str() {
                "pathloss_sweep" => ExperimentKind::PathlossSweep,
                "flighttime_sweep" => ExperimentKind::FlighttimeSweep,
                "coverage" => ExperimentKind::Coverage,
                "secrecy" => ExperimentKind::Secrecy,
                other => {
                    eprintln!("error: unknown experiment kind '{other}'");
                    return ExitCode::from(1);
                }
            };
        }
        if let Some(v) = o.elements {
            spec.elements = v;
        }
        if let Some(v) = o.frequencies_ghz {
            spec.frequencies_ghz = v;
        }
        if let Some(v) = o.areas_m2 {
            spec.areas_m2 = v;
        }
        if let Some(v) = o.altitudes_m {
            spec.altitudes_m = v;
        }
        if let Some(v) = o.snrs_db {
            spec.reference_snrs_db = v;
        }
    }
    if let Some(format) = &args.format {
        spec.format = match format.parse::<OutputFormat>() {
            Ok(f) => f,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        };
    }
    let out = args.out.unwrap_or_else(|| spec.output_path());

    let table = match exp::run_experiment(&spec, &loaded.config_hash, &loaded.defaults_applied) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = exp::write_results(&table, spec.format, &out) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    println!(
        "{} experiment: {} rows -> {} (seed {}, config {})",
        spec.kind,
        table.rows.len(),
        out.display(),
        spec.seed,
        loaded.config_hash
    );
    ExitCode::SUCCESS
}
