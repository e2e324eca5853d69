//! Library side of the `rtd` command-line tool: argument definitions, CSV
//! and JSON handling, and one function per subcommand, so tests can call
//! exactly what the binary runs.

pub mod args;
pub mod commands;
pub mod error;
pub mod io;
pub mod json;
pub mod svg;

use anyhow::Result;

use args::{Cli, Command};

/// Runs one parsed invocation, writing results to stdout and progress
/// tables to stderr.
pub fn run(cli: Cli) -> Result<()> {
    let text = match cli.command {
        Command::Compare(a) => json::to_string(&commands::compare(&a)?)?,
        Command::Barcode(a) => json::to_string(&commands::barcode(&a)?)?,
        Command::Bench(a) => {
            let out = commands::bench(&a)?;
            eprint!("{}", commands::render_table(&out.table));
            json::to_string(&out)?
        }
        Command::Synth(a) => json::to_string(&commands::synth(&a)?)?,
    };
    print!("{text}");
    Ok(())
}
