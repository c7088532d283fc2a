use std::process::ExitCode;

fn main() -> ExitCode {
    fwkit::harness::cli::main_with_args(std::env::args_os())
}
