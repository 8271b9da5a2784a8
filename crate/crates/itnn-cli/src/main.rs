use clap::Parser;

use itnn_cli::cli::Cli;
use itnn_cli::commands;

fn main() {
    let cli = Cli::parse();
    if let Err(err) = commands::run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
