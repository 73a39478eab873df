//! `rdexact`: build, evaluate and verify exact solutions of logistic
//! reaction-diffusion equations from the command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod exit;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{GeneticsArgs, SimulateArgs, SolveArgs, VerifyArgs};
use config::CommonArgs;

#[derive(Debug, Parser)]
#[command(name = "rdexact", version, about, allow_negative_numbers = true)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Construct the compatible diffusivity and its closed-form iterates
    Diffusivity,
    /// Tabulate the exact solution at several times
    Solve(SolveArgs),
    /// Run the residual, fixed-point and simulator checks; exit 12 on failure
    Verify(VerifyArgs),
    /// Critical reserve radius and diameter
    Reserve,
    /// Map genotype fitnesses to reaction parameters
    Genetics(GeneticsArgs),
    /// Finite-difference simulation started from the exact solution
    Simulate(SimulateArgs),
}

fn run(cli: &Cli) -> anyhow::Result<()> {
    let common = cli.common.merged()?;
    match &cli.command {
        Command::Diffusivity => commands::diffusivity(&common),
        Command::Solve(args) => commands::solve(&common, args),
        Command::Verify(args) => commands::verify(&common, args),
        Command::Reserve => commands::reserve(&common),
        Command::Genetics(args) => commands::genetics(&common, args),
        Command::Simulate(args) => commands::simulate(&common, args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(exit::USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit::code(&err))
        }
    }
}
