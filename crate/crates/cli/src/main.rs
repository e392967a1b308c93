mod args;
mod commands;
mod settings;

use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

use args::{Cli, Command};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Demand(#[from] tmtnet::demand::DemandError),
    #[error(transparent)]
    Graph(#[from] tmtnet::graph::GraphError),
    #[error(transparent)]
    Online(#[from] tmtnet::online::OnlineError),
    #[error(transparent)]
    Eval(#[from] tmtnet::eval::EvalError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Config(String),
    #[error("{0} run(s) failed")]
    Failed(usize),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(g) => commands::generate(g),
        Command::Stats(a) => commands::stats(a),
        Command::Run(a) => commands::run_cmd(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Decompose(a) => commands::decompose(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
