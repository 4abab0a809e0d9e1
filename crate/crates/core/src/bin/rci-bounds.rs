use clap::Parser;
use rci_bounds::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
