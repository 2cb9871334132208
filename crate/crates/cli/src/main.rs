use clap::Parser;

fn main() {
    let cli = nevpick_cli::Cli::parse();
    std::process::exit(nevpick_cli::run(cli));
}
