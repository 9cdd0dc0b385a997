//! Settings resolved from flags, an optional `key=value` file, and defaults,
//! in that order of precedence.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use fschar::HighestWeight;

pub const DEFAULT_L: usize = 2;
pub const DEFAULT_LEVEL: u32 = 2;
pub const DEFAULT_ZMAX: u32 = 6;
pub const DEFAULT_QMAX: i64 = 16;

/// Bad user input. Exits with status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Internal inconsistency such as a method that does not exist for the rank. Exits with status 1.
#[derive(Debug)]
pub struct Inconsistent(pub String);

impl fmt::Display for Inconsistent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Inconsistent {}

pub fn bad(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

/// Parsed `key=value` file. Blank lines and `#` comments are skipped.
#[derive(Debug, Default)]
pub struct FileConfig(BTreeMap<String, String>);

pub const KNOWN_KEYS: &[&str] = &[
    "method", "l", "weight", "level", "zmax", "qmax", "format", "jobs", "output", "suite", "golden",
    "init", "samples", "seed",
];

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| bad(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("config line {} is not key=value", i + 1)))?;
            let k = k.trim();
            if !KNOWN_KEYS.contains(&k) {
                return Err(bad(format!("unknown config key `{k}`")));
            }
            map.insert(k.to_string(), v.trim().to_string());
        }
        Ok(FileConfig(map))
    }

    /// Flag value if given, else the file's value, else `None`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> anyhow::Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| bad(format!("config value `{v}` for `{key}` does not parse"))),
        }
    }
}

pub fn parse_list(text: &str) -> Result<Vec<u32>, String> {
    text.split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|_| format!("`{p}` is not a nonnegative integer")))
        .collect()
}

/// Comma-separated list of nonnegative integers, for `--weight` and `--init`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct List(pub Vec<u32>);

impl FromStr for List {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_list(s).map(List)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Oracle,
    Fermionic,
    Fjmmt,
    Fjmmt2,
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Self as clap::ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Self as clap::ValueEnum>::from_str(s, true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    System,
    Lemmas,
    Fjmmt,
    Fjmmt2,
    All,
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Self as clap::ValueEnum>::from_str(s, true)
    }
}

/// Everything a subcommand needs, after precedence has been applied.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub l: usize,
    pub level: u32,
    pub weight: Option<HighestWeight>,
    pub zmax: u32,
    pub qmax: i64,
    pub format: Format,
    pub jobs: Option<usize>,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    /// The explicit weight, or `level * Lambda_0`.
    pub fn weight_or_vacuum(&self) -> anyhow::Result<HighestWeight> {
        match &self.weight {
            Some(w) => Ok(w.clone()),
            None => {
                let mut parts = vec![0; self.l + 1];
                parts[0] = self.level;
                HighestWeight::new(parts).map_err(|e| bad(e.to_string()))
            }
        }
    }
}

/// Shared flags, before the file and defaults are applied.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Common {
    /// Rank l (number of z variables)
    #[arg(long = "l")]
    pub l: Option<usize>,
    /// Highest weight as k_0,...,k_l
    #[arg(long)]
    pub weight: Option<List>,
    /// Level k, used when no weight is given
    #[arg(long)]
    pub level: Option<u32>,
    /// Cap on every z exponent
    #[arg(long)]
    pub zmax: Option<u32>,
    /// q truncation order
    #[arg(long)]
    pub qmax: Option<i64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads (also FSCHAR_JOBS)
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Write to this file instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// key=value file; flags take precedence over it
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Common {
    pub fn file(&self) -> anyhow::Result<FileConfig> {
        match &self.config {
            Some(p) => FileConfig::load(p),
            None => Ok(FileConfig::default()),
        }
    }

    pub fn resolve(&self, file: &FileConfig) -> anyhow::Result<RunConfig> {
        let l = file.pick(self.l, "l")?.unwrap_or(DEFAULT_L);
        if l == 0 {
            return Err(bad("l must be at least 1"));
        }
        let weight = file.pick(self.weight.clone(), "weight")?;
        let weight = match weight {
            None => None,
            Some(List(parts)) => {
                if parts.len() != l + 1 {
                    return Err(bad(format!(
                        "weight has {} parts, rank l={l} needs {}",
                        parts.len(),
                        l + 1
                    )));
                }
                Some(HighestWeight::new(parts).map_err(|e| bad(e.to_string()))?)
            }
        };
        let level = match &weight {
            Some(w) => w.level(),
            None => file.pick(self.level, "level")?.unwrap_or(DEFAULT_LEVEL),
        };
        if level == 0 {
            return Err(bad("level must be at least 1"));
        }
        let qmax = file.pick(self.qmax, "qmax")?.unwrap_or(DEFAULT_QMAX);
        if qmax < 0 {
            return Err(bad("qmax must be nonnegative"));
        }
        let jobs = match file.pick(self.jobs, "jobs")? {
            Some(j) => Some(j),
            None => match std::env::var("FSCHAR_JOBS") {
                Ok(v) => Some(v.parse().map_err(|_| bad(format!("FSCHAR_JOBS=`{v}` is not a count")))?),
                Err(_) => None,
            },
        };
        if jobs == Some(0) {
            return Err(bad("jobs must be at least 1"));
        }
        Ok(RunConfig {
            l,
            level,
            weight,
            zmax: file.pick(self.zmax, "zmax")?.unwrap_or(DEFAULT_ZMAX),
            qmax,
            format: file.pick(self.format, "format")?.unwrap_or(Format::Json),
            jobs,
            output: file.pick(self.output.clone(), "output")?,
        })
    }
}
