//! Command-line driver.
//!
//! ```text
//! competing-sir run (--config <path> | --preset <name>) [--set k=v ...] [--out <dir>] [--strict] [--threads N]
//! competing-sir presets [--show <name>]
//! ```
//!
//! Exit codes: 0 success, 1 validation error, 2 runtime error, 3 runs that
//! did not converge under `--strict`.

mod config;
mod presets;
mod run;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{
    AxisConfig, AxisParam, AxisValues, ConfigError, ExperimentConfig, ExperimentKind, LayerConfig,
    LayerSource, Origin, QuantityKind,
};
pub use presets::{preset, preset_experiments, Preset};
pub use run::{
    build_network, compute, run_experiment, write_outputs, DerivedSeeds, OutputFile, Report,
    RunError, EXIT_NOT_CONVERGED, EXIT_OK, EXIT_RUNTIME, EXIT_VALIDATION,
};

#[derive(Debug, Parser)]
#[command(name = "competing-sir", version, about = "Competing awareness/epidemic SIR dynamics on multiplex networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment and write its CSV outputs.
    Run(RunArgs),
    /// List the named figure-reproduction configurations.
    Presets {
        /// Print the full configuration of one preset.
        #[arg(long, value_name = "NAME")]
        show: Option<String>,
    },
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Experiment configuration file.
    #[arg(long, value_name = "PATH", required_unless_present = "preset", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Start from a named preset instead of a file.
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Override one configuration key; may be repeated.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory (overrides `output_dir`).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Exit with status 3 if any run hit `max_steps`.
    #[arg(long)]
    strict: bool,
    /// Worker threads (default: all cores).
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn main_entry<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Presets { show: None } => {
            for p in preset_experiments() {
                println!("{:<6}  {}", p.name, p.description);
            }
            EXIT_OK
        }
        Command::Presets { show: Some(name) } => match preset(&name) {
            Some(p) => {
                print!("{}", p.config.to_text());
                EXIT_OK
            }
            None => {
                eprintln!("error: unknown preset {name:?}");
                EXIT_VALIDATION
            }
        },
        Command::Run(args) => run_command(args),
    }
}

fn run_command(args: RunArgs) -> i32 {
    let (text, source) = match (&args.config, &args.preset) {
        (Some(path), _) => match std::fs::read_to_string(path) {
            Ok(t) => (t, path.display().to_string()),
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return EXIT_VALIDATION;
            }
        },
        (None, Some(name)) => match preset(name) {
            Some(p) => (p.config.to_text(), format!("preset {name}")),
            None => {
                eprintln!("error: unknown preset {name:?}");
                return EXIT_VALIDATION;
            }
        },
        (None, None) => unreachable!("clap requires --config or --preset"),
    };
    let mut cfg = match ExperimentConfig::parse_with_overrides(&text, &args.set) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {source}: {e}");
            return EXIT_VALIDATION;
        }
    };
    if let Some(out) = args.out {
        cfg.output_dir = out;
    }
    if let Some(t) = args.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return EXIT_VALIDATION;
        }
        // Fails only if the global pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match run_experiment(&cfg) {
        Ok((report, written)) => {
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            for path in written {
                println!("{}", path.display());
            }
            if args.strict && report.unconverged > 0 {
                EXIT_NOT_CONVERGED
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
