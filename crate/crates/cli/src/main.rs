use std::io::{self, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut stdout = io::BufWriter::new(stdout.lock());
    let status = tracec::run(std::env::args_os(), &mut stdout, &mut io::stderr());
    if stdout.flush().is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(status)
}
