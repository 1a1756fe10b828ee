mod cli;
mod commands;
mod manifest;
mod parse;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use cli::{Cli, Command};
use commands::CliError;
use manifest::RunManifest;

fn run(cli: &Cli) -> Result<String, CliError> {
    let json = cli.json;
    match &cli.command {
        Command::Analyze(a) => commands::analyze(a, json),
        Command::Search(a) => commands::search(a, json),
        Command::Tower(a) => commands::tower(a, json),
        Command::Construct(a) => commands::construct(a, json),
        Command::Structure(a) => commands::structure(a, json),
        Command::Oracle(a) => commands::oracle(a, json),
        Command::Figure(a) => commands::figure(a, json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }

    let start = Instant::now();
    let output = match run(&cli) {
        Ok(output) => output,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(output.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::FAILURE;
    }

    if let Some(path) = &cli.manifest {
        let manifest = RunManifest::new(
            cli.command.name(),
            serde_json::to_value(&cli.command).expect("serializable arguments"),
            cli.command.seed(),
            start.elapsed().as_secs_f64(),
            output.as_bytes(),
        );
        let text = serde_json::to_string_pretty(&manifest).expect("serializable manifest");
        if let Err(e) = std::fs::write(path, text + "\n") {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::SUCCESS
}
