use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tclgate_cli::{read_config, CliError};

#[derive(Parser)]
#[command(name = "tclgate", version, about = "Swap-gate decoherence in an Ohmic bath")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time series of all observables.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output_path` from the config.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also write the effective configuration (defaults filled in) here.
        #[arg(long)]
        dump_config: Option<PathBuf>,
    },
    /// One run per value of a parameter, plus a summary at the swap time.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        values: Vec<f64>,
    },
    /// Dump the bath kernel (u, Γ, Δ).
    Kernel {
        #[arg(long)]
        config: PathBuf,
        /// End of the sampled range, in units of the swap time.
        #[arg(long)]
        t_max: f64,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, output, dump_config } => {
            let cfg = read_config(&config)?;
            if let Some(path) = dump_config {
                tclgate_cli::dump_config(&cfg, &path)?;
            }
            let path = tclgate_cli::run(&cfg, output.as_deref())?;
            eprintln!("wrote {}", path.display());
        }
        Command::Sweep { config, param, values } => {
            let cfg = read_config(&config)?;
            for path in tclgate_cli::sweep(&cfg, &param, &values)? {
                eprintln!("wrote {}", path.display());
            }
        }
        Command::Kernel { config, t_max, points, output } => {
            let cfg = read_config(&config)?;
            let path = tclgate_cli::kernel(&cfg, t_max, points, output.as_deref())?;
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tclgate: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
