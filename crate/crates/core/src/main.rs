use clap::Parser;

fn main() {
    std::process::exit(sdres::cli::main_with(sdres::cli::Cli::parse()));
}
