//! Command-line experiments on the signal-based emulator.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod stats;

pub use args::{Cli, Command};
pub use commands::Outcome;
pub use config::ExperimentConfig;
pub use error::{CliError, Result};

/// Runs one command.
pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Qst { common, table } => commands::qst::run(&common.resolve()?, table.as_deref()),
        Command::Qpt { common, counts } => commands::qpt::run(&common.resolve()?, counts.as_deref()),
        Command::Iterate { common } => commands::iterate::run(&common.resolve()?),
        Command::Deutsch { common, trials } => {
            let mut cfg = common.resolve()?;
            if let Some(t) = trials {
                cfg.trials = *t;
                cfg.validate()?;
            }
            commands::deutsch::run(&cfg)
        }
        Command::Fit {
            series,
            common,
            predictor,
        } => commands::fit::run(&common.resolve()?, series, predictor.map(Into::into)),
    }
}
