mod args;
mod commands;
mod config;
mod output;

use args::{Cli, Command};
use clap::error::ErrorKind;
use clap::{CommandFactory, FromArgMatches};
use std::ffi::OsString;
use std::process::ExitCode;

/// Everything that ends a run early, with its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Config(String),
    Core(hetcv_core::Error),
    Io(String),
    ChecksFailed(usize),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 64,
            Failure::Config(_) => 78,
            Failure::Core(e) => e.exit_code() as u8,
            Failure::Io(_) | Failure::ChecksFailed(_) => 1,
        }
    }

    fn code(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "E_USAGE",
            Failure::Config(_) => "E_CONFIG",
            Failure::Core(e) => e.code(),
            Failure::Io(_) => "E_IO",
            Failure::ChecksFailed(_) => "E_CHECK",
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Config(m) | Failure::Io(m) => m.clone(),
            Failure::Core(e) => e.to_string(),
            Failure::ChecksFailed(n) => format!("{n} check(s) failed"),
        }
    }
}

impl From<hetcv_core::Error> for Failure {
    fn from(e: hetcv_core::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let argv: Vec<OsString> = std::env::args_os().collect();
    match run(argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error[{}]: {}", f.code(), f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

fn parse(argv: &[OsString]) -> Outcome<Cli> {
    let matches = Cli::command()
        .try_get_matches_from(argv)
        .map_err(clap_failure)?;
    Cli::from_arg_matches(&matches).map_err(clap_failure)
}

fn clap_failure(e: clap::Error) -> Failure {
    match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
            let _ = e.print();
            std::process::exit(0);
        }
        _ => Failure::Usage(e.render().to_string().trim_end().to_string()),
    }
}

fn run(argv: Vec<OsString>) -> Outcome<()> {
    let cli = parse(&argv)?;
    let (cli, file) = match &cli.config {
        None => (cli, None),
        Some(path) => {
            let file = config::load(path, &argv)?;
            (parse(&file.merged_argv)?, Some(file))
        }
    };
    let ctx = commands::Context {
        argv: argv
            .iter()
            .map(|a| a.to_string_lossy().into_owned())
            .collect(),
        file,
    };
    match &cli.command {
        Command::Pdf(a) => commands::pdf(a, &ctx),
        Command::Msd(a) => commands::msd(a, &ctx),
        Command::Acf(a) => commands::acf(a, &ctx),
        Command::Tamsd(a) => commands::tamsd(a, &ctx),
        Command::Simulate(a) => commands::simulate(a, &ctx),
        Command::SimulateVoter(a) => commands::simulate_voter(a, &ctx),
        Command::InvertLaplace(a) => commands::invert_laplace(a, &ctx),
        Command::Validate(a) => commands::validate(a, &ctx),
        Command::Specfun(args::SpecfunCommand::Eval(a)) => commands::specfun_eval(a),
    }
}
