use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vehicular_coverage::cli_io::{emit_results, parse_config, run_plan, ConfigFile, ExperimentKind};
use vehicular_coverage::scenarios::Execution;
use vehicular_coverage::Error;

const EXIT_CONFIG: u8 = 1;
const EXIT_RUNTIME: u8 = 2;

#[derive(Parser)]
#[command(name = "vehcov", version, about = "Vehicle coverage by ground and aerial base stations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coverage probability against base-station density
    SweepDensity(RunArgs),
    /// Pooled SNR distribution per base-station type
    SnrCdf(RunArgs),
    /// Spectral efficiency against base-station height
    SeTable(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// key=value config file; omitted keys use defaults
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config's master seed
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Run realizations on one thread
    #[arg(long)]
    sequential: bool,
}

fn load_config(path: Option<&PathBuf>) -> Result<ConfigFile, Error> {
    match path {
        None => Ok(ConfigFile::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Config {
                line: 0,
                message: format!("cannot read {}: {e}", p.display()),
            })?;
            parse_config(&text)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::SweepDensity(a) => (ExperimentKind::DensitySweep, a),
        Command::SnrCdf(a) => (ExperimentKind::SnrCdf, a),
        Command::SeTable(a) => (ExperimentKind::SeTable, a),
    };

    let plan = match load_config(args.config.as_ref()).and_then(|cfg| {
        let cfg = ConfigFile {
            seed: args.seed.unwrap_or(cfg.seed),
            ..cfg
        };
        cfg.plan(kind).map(|plan| (cfg, plan))
    }) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("config error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let (cfg, plan) = plan;

    let execution = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let results = match run_plan(&plan, execution) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("simulation error: {e}");
            return ExitCode::from(if e.is_config_error() { EXIT_CONFIG } else { EXIT_RUNTIME });
        }
    };

    let written = emit_results(kind, &results, &args.out).and_then(|mut paths| {
        let echo = args.out.join(format!("{}.config", kind.file_stem()));
        fs::write(&echo, cfg.to_text())?;
        paths.push(echo);
        Ok(paths)
    });
    match written {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("output error: {e}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
