//! `normbench`: generate → oracle → run → score → report, with manifests
//! that make every artifact reproducible from a seed.

mod commands;
mod manifest;

use clap::Parser;
use normbench_core::CoreError;

#[derive(Parser)]
#[command(
    name = "normbench",
    version,
    about = "Benchmark for norm-violation detection over simulated household event traces"
)]
struct Cli {
    #[command(subcommand)]
    command: commands::Command,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let exiting_cleanly = !err.use_stderr();
            err.print().ok();
            std::process::exit(if exiting_cleanly { 0 } else { 1 });
        }
    };
    if let Err(err) = commands::dispatch(cli.command) {
        eprintln!("error: {err:#}");
        std::process::exit(exit_code(&err));
    }
}

/// 1 for validation errors, 2 for transport failures.
fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<CoreError>() {
        Some(CoreError::Transport(_)) => 2,
        _ => 1,
    }
}
