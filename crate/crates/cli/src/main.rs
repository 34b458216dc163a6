use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod manifest;
mod pipeline;
mod svg;
mod tamper;

use args::{Cli, Command};

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let outcome = match cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Region(a) => commands::region(a),
        Command::Verify(a) => commands::verify(a),
        Command::Montecarlo(a) => commands::montecarlo(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    use jamregion::Error;
    let infeasible = e.chain().any(|cause| {
        matches!(
            cause.downcast_ref::<Error>(),
            Some(
                Error::NullSpaceUnavailable { .. }
                    | Error::RateOutOfRange { .. }
                    | Error::OutsideRegion { .. }
                    | Error::OutsideEavesRegion { .. }
                    | Error::EmptyAchievingSet
            )
        )
    });
    if infeasible {
        EXIT_INFEASIBLE
    } else {
        EXIT_USAGE
    }
}
