use std::net::SocketAddr;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use seating::cli::{self, SolveArgs};
use seating::service;

#[derive(Parser)]
#[command(version, about = "Seat guests at tables from their pairwise relationships")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a seating plan from CSV inputs.
    Solve(SolveArgs),
    /// Serve the HTTP API.
    Serve {
        #[arg(long, env = "SEATING_BIND", default_value = service::DEFAULT_BIND)]
        bind: SocketAddr,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Solve(args) => {
            let run = cli::run_solve(&args);
            if run.error.is_some() {
                eprint!("{}", run.report);
            } else if !args.quiet {
                print!("{}", run.report);
            }
            ExitCode::from(run.exit_code as u8)
        }
        Command::Serve { bind } => {
            let rt = tokio::runtime::Runtime::new().expect("tokio runtime");
            eprintln!("listening on http://{bind}");
            match rt.block_on(service::serve(bind)) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(cli::EXIT_INTERNAL as u8)
                }
            }
        }
    }
}
