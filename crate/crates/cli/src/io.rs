use crate::CliError;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

/// Reads every line of `path` (`-` is stdin). Invalid UTF-8 is replaced
/// rather than rejected so one bad byte costs one line, not the stream.
pub fn read_lines(path: &Path) -> Result<Vec<String>, CliError> {
    let reader: Box<dyn BufRead> = if path.as_os_str() == "-" {
        Box::new(BufReader::new(io::stdin().lock()))
    } else {
        let f = File::open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Box::new(BufReader::new(f))
    };
    reader
        .split(b'\n')
        .map(|l| {
            l.map(|b| String::from_utf8_lossy(&b).trim_end_matches('\r').to_string())
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
        })
        .collect()
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Opens `path` for writing, or stdout when `None`.
pub fn writer(path: Option<&PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_err(e: io::Error) -> CliError {
    CliError::Input(format!("write failed: {e}"))
}

/// Writes `text` to `path` (or stdout) in one go.
pub fn write_all(path: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_all(text.as_bytes()).map_err(write_err)?;
    w.flush().map_err(write_err)
}
