use clap::Parser;

fn main() {
    let cli = flw_cli::Cli::parse();
    std::process::exit(flw_cli::run(&cli));
}
