use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let code = critval_core::cli::main_with_args(
        std::env::args_os(),
        &mut io::stdout(),
        &mut io::stderr(),
    );
    ExitCode::from(code as u8)
}
