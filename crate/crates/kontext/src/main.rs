use std::process::ExitCode;

fn main() -> ExitCode {
    kontext::cli::main_with_args(std::env::args_os())
}
