use clap::Parser;

fn main() {
    let cli = hpball_cli::Cli::parse();
    std::process::exit(hpball_cli::run(cli));
}
