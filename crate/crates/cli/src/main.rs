use std::process::ExitCode;

fn main() -> ExitCode {
    certquad_cli::run(std::env::args_os())
}
