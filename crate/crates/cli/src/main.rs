use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    match minmax_cli::parse_config(&args).and_then(|cfg| minmax_cli::run(&cfg)) {
        Ok(status) => ExitCode::from(status.exit_code()),
        Err(minmax_cli::CliError::Help(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("minmax: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
