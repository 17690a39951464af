use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Values a config file may set. Anything given on the command line wins.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub bits: Option<u32>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let is_toml = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("toml"));
        if is_toml {
            toml::from_str(&text).map_err(|e| format!("bad TOML in {}: {e}", path.display()))
        } else {
            serde_json::from_str(&text).map_err(|e| format!("bad JSON in {}: {e}", path.display()))
        }
    }
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub bits: u32,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// `None` lets each subcommand use its natural format.
    pub format: Option<Format>,
}

pub const DEFAULT_SEED: u64 = 1;

impl Settings {
    pub fn merge(bits: Option<u32>, seed: Option<u64>, out: Option<PathBuf>, format: Option<Format>, file: FileConfig) -> Self {
        Self {
            bits: bits.or(file.bits).unwrap_or(lemniscate_core::DEFAULT_BITS),
            seed: seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            out: out.or(file.out),
            format: format.or(file.format),
        }
    }
}
