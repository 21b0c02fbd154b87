use std::io::IsTerminal;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ColorChoice, CommandFactory, FromArgMatches};
use dirac_qrw::cli::{self, Cli};

fn use_color() -> bool {
    std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty()) && std::io::stderr().is_terminal()
}

fn report(label: &str, message: impl std::fmt::Display) {
    if use_color() {
        eprintln!("\x1b[1;31m{label}:\x1b[0m {message}");
    } else {
        eprintln!("{label}: {message}");
    }
}

fn parse() -> Result<Cli, clap::Error> {
    let color = if use_color() {
        ColorChoice::Auto
    } else {
        ColorChoice::Never
    };
    let matches = Cli::command().color(color).try_get_matches()?;
    Cli::from_arg_matches(&matches)
}

fn main() -> ExitCode {
    let args = match parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.exit_code() == 0 { 0 } else { 1 });
        }
    };
    let started = Instant::now();
    match cli::run(&args) {
        Ok((output, written)) => {
            for w in &output.warnings {
                report("warning", w);
            }
            for path in &written {
                eprintln!("wrote {}", path.display());
            }
            eprintln!("elapsed {:.3} s", started.elapsed().as_secs_f64());
            ExitCode::SUCCESS
        }
        Err(e) => {
            report("error", &e);
            ExitCode::from(e.exit_code())
        }
    }
}
