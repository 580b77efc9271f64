//! Key-value run configuration files.
//!
//! Format: one `key = value` pair per line, `#` comments, blank lines
//! allowed. Keys mirror the simulation configuration plus the output path
//! and command-specific options. Unknown keys and invalid values are
//! rejected with the offending line number. Flags override file values.

use std::collections::HashMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use robeq::instances::Regime;
use robeq::Method;

use crate::CliError;

const KNOWN_KEYS: &[&str] = &[
    "method",
    "h_est",
    "epsilon",
    "mean_x",
    "var_x",
    "var_n",
    "true_h",
    "trials",
    "samples_per_trial",
    "seed",
    "methods",
    "threads",
    "eps_grid",
    "count",
    "regime",
    "out",
];

/// A parsed configuration file: raw values with their line numbers.
#[derive(Debug, Default)]
pub struct FileConfig {
    path: String,
    entries: HashMap<String, (String, usize)>,
}

impl FileConfig {
    /// Loads and validates a configuration file. Returns an empty
    /// configuration when no path is given.
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage {
            message: format!("cannot read config {}: {e}", path.display()),
        })?;
        let mut entries = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage {
                    message: format!(
                        "{}:{line_no}: expected 'key = value', got '{raw}'",
                        path.display()
                    ),
                });
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage {
                    message: format!("{}:{line_no}: unknown key '{key}'", path.display()),
                });
            }
            if entries.insert(key.clone(), (value, line_no)).is_some() {
                return Err(CliError::Usage {
                    message: format!("{}:{line_no}: duplicate key '{key}'", path.display()),
                });
            }
        }
        let cfg = Self {
            path: path.display().to_string(),
            entries,
        };
        cfg.validate_invariants()?;
        Ok(cfg)
    }

    /// Range checks that do not depend on which command runs.
    fn validate_invariants(&self) -> Result<(), CliError> {
        if let Some(trials) = self.get::<u64>("trials")? {
            if trials < 1 {
                return Err(self.line_error("trials", "must be >= 1"));
            }
        }
        if let Some(samples) = self.get::<u64>("samples_per_trial")? {
            if samples < 1 {
                return Err(self.line_error("samples_per_trial", "must be >= 1"));
            }
        }
        if let Some(epsilon) = self.get::<f64>("epsilon")? {
            if !(epsilon >= 0.0) || !epsilon.is_finite() {
                return Err(self.line_error("epsilon", "must be finite and >= 0"));
            }
        }
        for key in ["var_x", "var_n"] {
            if let Some(v) = self.get::<f64>(key)? {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(self.line_error(key, "must be finite and > 0"));
                }
            }
        }
        for key in ["mean_x", "true_h", "h_est"] {
            if let Some(v) = self.get::<f64>(key)? {
                if !v.is_finite() {
                    return Err(self.line_error(key, "must be finite"));
                }
            }
        }
        // Parse-only checks for the structured values.
        self.get::<Method>("method")?;
        self.get::<Regime>("regime")?;
        self.methods()?;
        self.eps_grid()?;
        Ok(())
    }

    fn line_error(&self, key: &str, what: impl Display) -> CliError {
        let line = self.entries.get(key).map(|(_, l)| *l).unwrap_or(0);
        CliError::Usage {
            message: format!("{}:{line}: {key} {what}", self.path),
        }
    }

    /// Typed lookup with a line-numbered parse error.
    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some((raw, line)) => raw.parse::<T>().map(Some).map_err(|e| CliError::Usage {
                message: format!("{}:{line}: {key}: {e} (value '{raw}')", self.path),
            }),
        }
    }

    /// The `out` path, if configured.
    pub fn out(&self) -> Option<PathBuf> {
        self.entries.get("out").map(|(v, _)| PathBuf::from(v))
    }

    /// The `methods` list, if configured.
    pub fn methods(&self) -> Result<Option<Vec<Method>>, CliError> {
        match self.entries.get("methods") {
            None => Ok(None),
            Some((raw, line)) => parse_method_list(raw).map(Some).map_err(|e| CliError::Usage {
                message: format!("{}:{line}: methods: {e}", self.path),
            }),
        }
    }

    /// The `eps_grid` list, if configured.
    pub fn eps_grid(&self) -> Result<Option<Vec<f64>>, CliError> {
        match self.entries.get("eps_grid") {
            None => Ok(None),
            Some((raw, line)) => parse_grid(raw).map(Some).map_err(|e| CliError::Usage {
                message: format!("{}:{line}: eps_grid: {e}", self.path),
            }),
        }
    }
}

/// Parses a comma-separated method list, preserving canonical column
/// order and rejecting duplicates.
pub fn parse_method_list(raw: &str) -> Result<Vec<Method>, String> {
    let mut picked = Vec::new();
    for token in raw.split(',') {
        let token = token.trim();
        if token.is_empty() {
            return Err("empty method name".into());
        }
        let method: Method = token.parse()?;
        if picked.contains(&method) {
            return Err(format!("duplicate method '{method}'"));
        }
        picked.push(method);
    }
    if picked.is_empty() {
        return Err("no methods given".into());
    }
    let ordered: Vec<Method> = Method::ALL
        .into_iter()
        .filter(|m| picked.contains(m))
        .collect();
    Ok(ordered)
}

/// Parses a comma-separated, strictly increasing epsilon grid.
pub fn parse_grid(raw: &str) -> Result<Vec<f64>, String> {
    let mut grid = Vec::new();
    for token in raw.split(',') {
        let token = token.trim();
        let value: f64 = token
            .parse()
            .map_err(|e| format!("bad grid value '{token}': {e}"))?;
        if !value.is_finite() || value < 0.0 {
            return Err(format!("grid values must be finite and >= 0, got {value}"));
        }
        grid.push(value);
    }
    if grid.is_empty() {
        return Err("empty grid".into());
    }
    for pair in grid.windows(2) {
        if !(pair[0] < pair[1]) {
            return Err(format!(
                "grid must be strictly increasing, got {} then {}",
                pair[0], pair[1]
            ));
        }
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_tmp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn parses_values_and_comments() {
        let f = write_tmp("# comment\ntrials = 50\nseed=7\n\nmean_x = 0.25\n");
        let cfg = FileConfig::load(Some(f.path())).unwrap();
        assert_eq!(cfg.get::<u64>("trials").unwrap(), Some(50));
        assert_eq!(cfg.get::<u64>("seed").unwrap(), Some(7));
        assert_eq!(cfg.get::<f64>("mean_x").unwrap(), Some(0.25));
        assert_eq!(cfg.get::<f64>("var_x").unwrap(), None);
    }

    #[test]
    fn rejects_unknown_keys_with_line_numbers() {
        let f = write_tmp("trials = 50\ntrails = 3\n");
        let err = FileConfig::load(Some(f.path())).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains(":2:"), "{msg}");
        assert!(msg.contains("unknown key 'trails'"), "{msg}");
    }

    #[test]
    fn rejects_invariant_violations_with_line_numbers() {
        let f = write_tmp("seed = 1\ntrials = 0\n");
        let err = FileConfig::load(Some(f.path())).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains(":2: trials must be >= 1"), "{msg}");

        let f = write_tmp("var_n = -2\n");
        let msg = format!("{}", FileConfig::load(Some(f.path())).unwrap_err());
        assert!(msg.contains(":1: var_n must be finite and > 0"), "{msg}");
    }

    #[test]
    fn rejects_type_errors_with_line_numbers() {
        let f = write_tmp("trials = soon\n");
        let msg = format!("{}", FileConfig::load(Some(f.path())).unwrap_err());
        assert!(msg.contains(":1:"), "{msg}");
        assert!(msg.contains("trials"), "{msg}");
    }

    #[test]
    fn method_lists_are_canonicalized_and_deduplicated() {
        assert_eq!(
            parse_method_list("minimin,mmse").unwrap(),
            vec![Method::Mmse, Method::Minimin]
        );
        assert!(parse_method_list("mmse,mmse").is_err());
        assert!(parse_method_list("sideways").is_err());
    }

    #[test]
    fn grids_must_increase() {
        assert_eq!(parse_grid("0.1, 0.2").unwrap(), vec![0.1, 0.2]);
        assert!(parse_grid("0.2,0.1").is_err());
        assert!(parse_grid("0.1,0.1").is_err());
        assert!(parse_grid("-0.1,0.2").is_err());
    }
}
