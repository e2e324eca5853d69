use clap::Parser;

use rtd_cli::args::Cli;
use rtd_cli::error::exit_code;

fn main() {
    let cli = Cli::parse();
    if let Err(err) = rtd_cli::run(cli) {
        eprintln!("error: {err:#}");
        std::process::exit(exit_code(&err));
    }
}
