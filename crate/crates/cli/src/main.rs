use std::process::ExitCode;

use clap::Parser;

use qgs_cli::error::exit;
use qgs_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::VALIDATION } else { exit::SUCCESS };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let check = cli.command.args().check;
    match run(&cli.command) {
        Ok(outcome) => {
            for c in &outcome.manifest.checks {
                println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            println!("wrote {}", outcome.out_dir.display());
            if check && !outcome.all_checks_pass() {
                ExitCode::from(exit::THRESHOLD as u8)
            } else {
                ExitCode::from(exit::SUCCESS as u8)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit::VALIDATION as u8)
        }
    }
}
