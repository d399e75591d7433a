use clap::Parser;

fn main() {
    let cli = qfactor::cli::Cli::parse();
    std::process::exit(qfactor::cli::main_with(cli));
}
