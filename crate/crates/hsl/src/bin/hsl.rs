use clap::Parser;

fn main() {
    let cli = hsl::cli::Cli::parse();
    std::process::exit(hsl::cli::run(cli));
}
