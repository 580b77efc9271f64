//! Deterministic number formatting and output plumbing.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::CliError;

/// Formats a double with 17 significant digits (scientific form), enough
/// to survive a parse round trip bit-exactly on every platform.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `content` to `out` when given, otherwise to standard output.
pub fn write_out(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content).map_err(|e| CliError::Io {
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(content.as_bytes()).map_err(|e| CliError::Io {
                message: format!("cannot write to standard output: {e}"),
            })
        }
    }
}
