use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use psi_growth::runner::{describe, load_effective, run, Overrides};

#[derive(Parser)]
#[command(name = "psi-growth", version, about = "Simulate psi-growth processes and estimate their limit theory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// Experiment configuration (TOML).
    config: PathBuf,
    /// Root seed, overriding the file.
    #[arg(long, env = "PSIGROWTH_SEED")]
    seed: Option<u64>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, env = "PSIGROWTH_WORKERS")]
    workers: Option<usize>,
    /// Output directory, overriding the file.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides { seed: self.seed, workers: self.workers, out: self.out.clone() }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment and write its artifacts.
    Run(Common),
    /// Check the configuration without running it.
    Validate(Common),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match cli.command {
        Command::Validate(c) => match load_effective(&c.config, &c.overrides()).and_then(|(cfg, _)| describe(&cfg)) {
            Ok(text) => {
                print!("{text}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        },
        Command::Run(c) => match run(&c.config, &c.overrides()) {
            Ok((dir, manifest)) => {
                println!("wrote {} files to {}", manifest.outputs.len() + 1, dir.display());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
    }
}
