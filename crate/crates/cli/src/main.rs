use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use costshare::shuffle::CoordinateKind;

mod commands;
mod render;

use commands::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "costshare",
    version,
    about = "Online cost sharing mechanisms and their verifier"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Display {
    /// Also show values as decimals with this many places.
    #[arg(long, value_name = "PLACES")]
    decimal: Option<usize>,
}

#[derive(Debug, Args)]
struct Arrival {
    /// Arrival order as comma-separated names; overrides the file's own.
    #[arg(long, value_name = "NAMES")]
    arrival: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a mechanism over an arrival order.
    Allocate {
        game: PathBuf,
        #[arg(long, default_value = "egsfs", value_parser = ["sfs", "gsfs", "egsfs"])]
        mechanism: String,
        #[arg(long, default_value = "reverse")]
        cd: CoordinateKind,
        /// Print the shares after every arrival.
        #[arg(long)]
        trace: bool,
        /// Write allocation records to this report file.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        #[command(flatten)]
        arrival: Arrival,
        #[command(flatten)]
        display: Display,
    },
    /// Print the image ordering after every arrival of a 0-1 game.
    Shuffle {
        game: PathBuf,
        #[arg(long, default_value = "reverse")]
        cd: CoordinateKind,
        #[command(flatten)]
        arrival: Arrival,
    },
    /// Reconstruct the arrival order behind an image ordering.
    Invert {
        game: PathBuf,
        #[arg(long, value_name = "NAMES")]
        image: String,
        #[arg(long, default_value = "reverse")]
        cd: CoordinateKind,
        /// Also print the players in the order they were identified.
        #[arg(long)]
        steps: bool,
    },
    /// Exact Shapley values by enumeration.
    Shapley {
        game: PathBuf,
        #[command(flatten)]
        display: Display,
    },
    /// Level-set decomposition into weighted 0-1 games.
    Decompose {
        game: PathBuf,
        #[command(flatten)]
        display: Display,
    },
    /// Run a verification suite, or replay the witnesses of a report.
    Verify {
        #[arg(long, default_value = "golden", conflicts_with = "replay")]
        suite: String,
        #[arg(long, value_name = "K")]
        n: Option<usize>,
        #[arg(long, value_name = "S")]
        seed: Option<u64>,
        /// Sweep a single coordinate rule.
        #[arg(long)]
        cd: Option<CoordinateKind>,
        /// Run on one thread.
        #[arg(long)]
        serial: bool,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Re-run every witness in a report file.
        #[arg(long, value_name = "FILE")]
        replay: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Allocate {
            game,
            mechanism,
            cd,
            trace,
            out: report,
            arrival,
            display,
        } => commands::allocate(
            &mut out,
            &commands::AllocateArgs {
                game,
                mechanism,
                cd,
                trace,
                report,
                arrival: arrival.arrival,
                decimal: display.decimal,
            },
        ),
        Command::Shuffle { game, cd, arrival } => {
            commands::shuffle(&mut out, &game, cd, arrival.arrival.as_deref())
        }
        Command::Invert {
            game,
            image,
            cd,
            steps,
        } => commands::invert(&mut out, &game, &image, cd, steps),
        Command::Shapley { game, display } => commands::shapley(&mut out, &game, display.decimal),
        Command::Decompose { game, display } => {
            commands::decompose(&mut out, &game, display.decimal)
        }
        Command::Verify {
            suite,
            n,
            seed,
            cd,
            serial,
            out: report,
            replay,
        } => match replay {
            Some(path) => commands::replay(&mut out, &path),
            None => commands::verify(
                &mut out,
                &suite,
                costshare::verify::SuiteOptions {
                    n,
                    seed,
                    cd,
                    parallel: !serial,
                },
                report.as_deref(),
            ),
        },
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::PropertyFailure) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
