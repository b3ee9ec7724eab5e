use clap::Parser;

fn main() {
    let cli = ahs::cli::Cli::parse();
    std::process::exit(ahs::cli::run(&cli));
}
