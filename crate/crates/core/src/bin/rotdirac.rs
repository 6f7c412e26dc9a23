use clap::Parser;
use rotdirac::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
