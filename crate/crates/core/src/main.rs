use clap::Parser;

fn main() {
    let args = berlab::cli::Args::parse();
    std::process::exit(berlab::cli::main_with_args(args));
}
