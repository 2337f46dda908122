use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let outcome = dercat_cli::run(&args);
    if let Some((path, text)) = &outcome.dot {
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("dercat: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    let mut out = std::io::stdout().lock();
    if out.write_all(outcome.stdout.as_bytes()).and_then(|_| out.flush()).is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.exit_code as u8)
}
