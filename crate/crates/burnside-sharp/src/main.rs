use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(burnside_sharp::cli::run() as u8)
}
