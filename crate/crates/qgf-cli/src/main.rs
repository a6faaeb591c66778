use clap::error::ErrorKind;
use clap::Parser;
use qgf_cli::args::Cli;
use qgf_cli::error::CliError;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let err = CliError::Argument(e.render().to_string().trim().to_string());
            eprintln!("{}", err.record());
            std::process::exit(err.exit_code());
        }
    };
    if let Err(e) = qgf_cli::configure_threads().and_then(|_| qgf_cli::run(&cli)) {
        eprintln!("{}", e.record());
        std::process::exit(e.exit_code());
    }
}
