// SPDX-License-Identifier: Apache-2.0

use std::process::ExitCode;

use clap::Parser;
use qccd_cli::args::{Cli, Command};
use qccd_cli::{cmd_compile, cmd_oracle_check, cmd_sweep, exit_code};

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Compile(a) => {
            cmd_compile(&a.to_config()?)?;
        }
        Command::Sweep(a) => {
            cmd_sweep(&a.base.to_config()?, a.axis, &a.values)?;
        }
        Command::OracleCheck(a) => {
            cmd_oracle_check(&a.to_config())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
