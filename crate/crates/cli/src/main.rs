mod experiments;

use clap::{Parser, Subcommand};
use experiments::{run_config, ExitKind};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "pwlab", version, about = "Sampling, divergence, filtering, and phase-retrieval experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config file.
    Run { config: PathBuf },
    /// List the available experiments and what each one demonstrates.
    List,
    /// Verify the built-in measurement frame for a given dimension.
    FrameCheck {
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
}

fn init_threads() {
    if let Ok(v) = std::env::var("PWLAB_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn main() {
    init_threads();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run { config } => run_config(&config),
        Command::List => {
            for (name, claim) in experiments::CATALOG {
                println!("{name:12}  {claim}");
            }
            Ok(ExitKind::Pass)
        }
        Command::FrameCheck { k } => experiments::frame_check(k),
    };
    let code = match outcome {
        Ok(ExitKind::Pass) => 0,
        Ok(ExitKind::PropertyFailed) => 2,
        Err(e) => {
            eprintln!("error: {e}");
            3
        }
    };
    std::process::exit(code);
}
