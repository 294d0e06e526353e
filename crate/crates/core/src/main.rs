use clap::Parser;

fn main() {
    std::process::exit(metazeta::cli::main_with_args(metazeta::cli::Args::parse()));
}
