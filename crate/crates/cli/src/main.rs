use clap::Parser;

fn main() {
    let cli = bsespec_cli::Cli::parse();
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = bsespec_cli::execute(&cli, &mut stdout) {
        eprintln!("{}", e.line());
        std::process::exit(e.code);
    }
}
