use clap::Parser;

fn main() {
    let cli = safc_cli::Cli::parse();
    let mut stdout = std::io::stdout();
    if let Err(err) = safc_cli::run(cli, &mut stdout) {
        eprintln!("error: {}", err.message());
        std::process::exit(err.exit_code());
    }
}
