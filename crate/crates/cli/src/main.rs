use clap::Parser;

fn main() {
    let cli = cnr::Cli::parse();
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr());
    if let Err(e) = cnr::run(&cli, &mut out, &mut err) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
