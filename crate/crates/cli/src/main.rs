use std::io;
use std::process::ExitCode;

use clap::Parser;
use dicke_cat_cli::{run, Cli, Outcome, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match RunConfig::from_cli(&cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(Outcome::Usage.code() as u8);
        }
    };
    let outcome = run(&config, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(outcome.code() as u8)
}
