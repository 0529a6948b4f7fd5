use ab_vortex_cli::config::{Action, Cli, RunConfig};
use ab_vortex_cli::run;
use clap::error::ErrorKind;
use clap::Parser;
use std::process::ExitCode;

// exit codes: 0 success, 1 usage error, 2 numeric/validation failure,
// 3 verify-suite failure
fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let action = match RunConfig::from_cli(cli) {
        Ok(action) => action,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };

    match action {
        Action::Verify {
            report,
            write_report,
        } => ExitCode::from(run::verify::run(&report, write_report) as u8),
        Action::Table(config) => {
            let table = match run::build_table(&config) {
                Ok(table) => table,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let rendered = table.render();
            match &config.output {
                None => {
                    print!("{rendered}");
                    ExitCode::SUCCESS
                }
                Some(path) => match std::fs::write(path, rendered) {
                    Ok(()) => ExitCode::SUCCESS,
                    Err(e) => {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        ExitCode::from(2)
                    }
                },
            }
        }
    }
}
