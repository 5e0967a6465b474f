mod args;
mod commands;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use wavesnap::Error;

use crate::args::{Cli, Command};

/// Writes through a temporary file in the target's directory, then renames.
fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::UnknownSuite(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let out = match commands::run(&cli.command, cli.seed) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("wavesnap: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let reproduce = matches!(cli.command, Command::Reproduce { .. });
    let mut writes = Vec::new();
    for (path, text) in &out.side {
        // `reproduce` leaves its JSON detail unnamed; it goes to `--out`.
        if path.as_os_str().is_empty() {
            if let Some(p) = &cli.out {
                writes.push((p.as_path(), text.as_str()));
            }
        } else {
            writes.push((path.as_path(), text.as_str()));
        }
    }
    match (&cli.out, reproduce) {
        (Some(p), false) => writes.push((p.as_path(), out.main.as_str())),
        _ => print!("{}", out.main),
    }
    for (path, text) in writes {
        if let Err(e) = write_atomic(path, text) {
            eprintln!("wavesnap: {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::from(out.exit as u8)
}
