use std::process::ExitCode;

use clap::Parser;
use qdist_cli::commands::{cmd_gen, cmd_run, cmd_verify, emit, CommandOutput};
use qdist_cli::config::{Cli, Command, RunConfig};
use qdist_cli::error::CliError;

fn execute(cli: &Cli) -> Result<bool, CliError> {
    let (output, out): (CommandOutput, _) = match &cli.command {
        Command::Run(args) => {
            let config = RunConfig::from_args(args)?;
            (cmd_run(&config)?, config.out)
        }
        Command::Verify(args) => {
            let config = RunConfig::from_args(args)?;
            (cmd_verify(&config)?, config.out)
        }
        Command::Gen(args) => (cmd_gen(args)?, args.out.clone()),
    };
    emit(&output.json, out.as_deref())?;
    eprintln!("{}", output.summary);
    Ok(output.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qdist: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
