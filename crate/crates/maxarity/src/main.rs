use clap::Parser;

fn main() {
    let cli = maxarity::cli::Cli::parse();
    std::process::exit(maxarity::cli::run(cli));
}
