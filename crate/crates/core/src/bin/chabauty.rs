use std::io::Write;

use clap::Parser;

use chabauty::cli_frontend::{run, Cli};

fn main() {
    let cli = Cli::parse();
    let (code, output) = run(&cli);
    // A closed pipe on the reader's side is not an error worth reporting.
    let _ = if code == 0 || cli.json {
        writeln!(std::io::stdout().lock(), "{output}")
    } else {
        writeln!(std::io::stderr().lock(), "{output}")
    };
    std::process::exit(code);
}
