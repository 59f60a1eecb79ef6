use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use midcost_cli::{render_error, run, write_atomic, Cli, Format};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let output = cli.command.output().clone();

    let report = match run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("midcost {name}: {e}");
            if output.format == Format::Json {
                print!("{}", render_error(name, &e));
            }
            return ExitCode::from(e.exit_code());
        }
    };
    for d in &report.diagnostics {
        eprintln!("midcost {name}: {d}");
    }
    let text = report.render(output.format);
    match &output.out {
        Some(path) => {
            if let Err(e) = write_atomic(path, &text) {
                eprintln!("midcost {name}: {e}");
                return ExitCode::from(e.exit_code());
            }
            eprintln!("midcost {name}: wrote {}", path.display());
        }
        None => {
            let mut out = std::io::stdout().lock();
            if out
                .write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
        }
    }
    ExitCode::from(report.status)
}
