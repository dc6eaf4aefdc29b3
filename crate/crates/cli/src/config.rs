//! Optional configuration file listing external provers.

use std::path::{Path, PathBuf};
use std::time::Duration;

use ftl_core::bridge::{validate_specs, ExternalProverSpec, SpecError};
use serde::Deserialize;
use thiserror::Error;

/// Overrides the configuration file location.
pub const CONFIG_ENV: &str = "FTL_VERIFY_CONFIG";
/// Looked up in the working directory when neither flag nor variable is set.
pub const DEFAULT_CONFIG: &str = "verify.toml";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("prover `{0}`: timeout must be positive")]
    BadTimeout(String),
    #[error(transparent)]
    Spec(#[from] SpecError),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProverEntry {
    id: String,
    command: String,
    /// Seconds.
    timeout: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    max_processes: Option<usize>,
    #[serde(default, rename = "prover")]
    provers: Vec<ProverEntry>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    pub provers: Vec<ExternalProverSpec>,
    pub max_processes: Option<usize>,
}

impl Config {
    pub fn prover(&self, id: &str) -> Option<&ExternalProverSpec> {
        self.provers.iter().find(|p| p.id == id)
    }
}

/// `explicit`, else the environment variable, else the default file if it
/// exists. No file at all gives the empty configuration.
pub fn config_path(explicit: Option<&Path>) -> Option<PathBuf> {
    if let Some(p) = explicit {
        return Some(p.to_path_buf());
    }
    if let Some(p) = std::env::var_os(CONFIG_ENV).filter(|p| !p.is_empty()) {
        return Some(PathBuf::from(p));
    }
    let default = PathBuf::from(DEFAULT_CONFIG);
    default.exists().then_some(default)
}

pub fn parse_config(
    text: &str,
    path: &Path,
    default_timeout: Duration,
) -> Result<Config, ConfigError> {
    let file: ConfigFile = toml::from_str(text).map_err(|source| ConfigError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    let mut provers = Vec::new();
    for p in file.provers {
        let timeout = match p.timeout {
            Some(t) if t > 0.0 && t.is_finite() => Duration::from_secs_f64(t),
            Some(_) => return Err(ConfigError::BadTimeout(p.id)),
            None => default_timeout,
        };
        provers.push(ExternalProverSpec {
            id: p.id,
            command: p.command,
            timeout,
        });
    }
    validate_specs(&provers)?;
    Ok(Config {
        provers,
        max_processes: file.max_processes,
    })
}

pub fn load_config(path: Option<&Path>, default_timeout: Duration) -> Result<Config, ConfigError> {
    let Some(path) = path else {
        return Ok(Config::default());
    };
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text, path, default_timeout)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Config, ConfigError> {
        parse_config(text, Path::new("verify.toml"), Duration::from_secs(10))
    }

    #[test]
    fn provers_are_read() {
        let c = parse(
            "max_processes = 2\n[[prover]]\nid = \"e\"\ncommand = \"eprover --auto {file}\"\ntimeout = 2.5\n\n[[prover]]\nid = \"v\"\ncommand = \"vampire {file}\"\n",
        )
        .unwrap();
        assert_eq!(c.max_processes, Some(2));
        assert_eq!(c.prover("e").unwrap().timeout, Duration::from_millis(2500));
        assert_eq!(c.prover("v").unwrap().timeout, Duration::from_secs(10));
        assert!(c.prover("x").is_none());
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(matches!(
            parse("[[prover]]\nid = \"e\"\ncommand = \"eprover\"\n"),
            Err(ConfigError::Spec(_))
        ));
        let twice = "[[prover]]\nid = \"e\"\ncommand = \"a {file}\"\n[[prover]]\nid = \"e\"\ncommand = \"b {file}\"\n";
        assert!(matches!(
            parse(twice),
            Err(ConfigError::Spec(SpecError::DuplicateId(_)))
        ));
        assert!(matches!(
            parse("[[prover]]\nid = \"e\"\ncommand = \"a {file}\"\ntimeout = 0\n"),
            Err(ConfigError::BadTimeout(_))
        ));
        assert!(matches!(
            parse("provers = 1\n"),
            Err(ConfigError::Parse { .. })
        ));
    }

    #[test]
    fn empty_file_is_empty_config() {
        assert_eq!(parse("").unwrap(), Config::default());
    }
}
