use std::process::ExitCode;

fn main() -> ExitCode {
    stpec::cli::run()
}
