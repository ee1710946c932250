use std::process::ExitCode;

fn main() -> ExitCode {
    isoflag_cli::run(std::env::args_os())
}
