use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lptv_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            let _ = stdout.flush();
            for note in &out.notes {
                eprintln!("lptv: {note}");
            }
            match out.failure {
                Some(err) => {
                    eprintln!("lptv: {err}");
                    ExitCode::from(err.exit_code() as u8)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(err) => {
            eprintln!("lptv: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
