use std::process::ExitCode;

fn main() -> ExitCode {
    relaycap::main_with_args(std::env::args_os())
}
