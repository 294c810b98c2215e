use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rd_pdhg::cli;

#[derive(Parser)]
#[command(name = "rd-pdhg", version, about = "Implicit reaction-diffusion solver driven by G-prox PDHG")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a TOML configuration
    Run { config: PathBuf },
    /// Optimal step products and rates for the given condition numbers
    Theory {
        #[arg(required = true, allow_negative_numbers = true)]
        kappa: Vec<f64>,
        /// Largest eigenvalue magnitude used to scale the optimal tau product
        #[arg(long, default_value_t = 1.0)]
        lambda_max: f64,
    },
    /// Print preset configurations
    Presets { name: Option<String> },
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { cli::EXIT_VALIDATION } else { cli::EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let code = match args.command {
        Command::Run { config } => cli::run_command(&config),
        Command::Theory { kappa, lambda_max } => cli::theory_command(&kappa, lambda_max),
        Command::Presets { name } => cli::presets_command(name.as_deref()),
    };
    ExitCode::from(code as u8)
}
