use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let outcome = finmet_cli::run_command(&argv);
    if !outcome.written {
        let mut out = std::io::stdout().lock();
        let _ = out.write_all(outcome.text.as_bytes());
    }
    ExitCode::from(outcome.code as u8)
}
