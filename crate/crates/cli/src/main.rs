use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(regtourn_cli::run(std::env::args_os()))
}
