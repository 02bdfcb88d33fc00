use clap::Parser;

fn main() {
    let cli = toposcope::cli::Cli::parse();
    if let Err(e) = toposcope::cli::execute(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
