use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use holecount::construction::ConstructionParams;
use holecount::exact_math::{parse_rational, ExactScalar};

use crate::CliError;

/// Everything a run needs. Values come from an optional `key=value` file,
/// overridden by command-line flags.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunConfig {
    pub m: Option<usize>,
    pub path_depth: Option<usize>,
    pub gamma_length: Option<usize>,
    pub zeta2: Option<String>,
    pub zeta3: Option<String>,
    pub t: Option<String>,
    pub eps: Option<String>,
    pub resolution: Option<String>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub n: Option<usize>,
    pub digits: Option<usize>,
    pub family: Option<String>,
}

/// Reads `key=value` lines; blank lines and lines starting with `#` are skipped.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Input(format!("config line {}: expected key=value", no + 1)))?;
        map.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(map)
}

pub fn load_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)?;
    parse_config_text(&text)
}

fn parse_count(key: &str, v: &str) -> Result<usize, CliError> {
    v.parse()
        .map_err(|_| CliError::Input(format!("{key}: expected a count, got {v:?}")))
}

impl RunConfig {
    /// Config built from file entries; unknown keys are rejected.
    pub fn from_entries(entries: &BTreeMap<String, String>) -> Result<Self, CliError> {
        let mut c = RunConfig::default();
        for (k, v) in entries {
            let v = v.clone();
            match k.as_str() {
                "m" => c.m = Some(parse_count(k, &v)?),
                "depth" | "path_depth" => c.path_depth = Some(parse_count(k, &v)?),
                "gamma_len" | "gamma_length" => c.gamma_length = Some(parse_count(k, &v)?),
                "zeta2" => c.zeta2 = Some(v),
                "zeta3" => c.zeta3 = Some(v),
                "t" => c.t = Some(v),
                "eps" => c.eps = Some(v),
                "resolution" => c.resolution = Some(v),
                "out" => c.out = Some(PathBuf::from(v)),
                "threads" => c.threads = Some(parse_count(k, &v)?),
                "seed" => {
                    c.seed = Some(v.parse().map_err(|_| CliError::Input(format!("seed: {v:?}")))?)
                }
                "trials" => c.trials = Some(parse_count(k, &v)?),
                "n" => c.n = Some(parse_count(k, &v)?),
                "digits" => c.digits = Some(parse_count(k, &v)?),
                "family" => c.family = Some(v),
                other => return Err(CliError::Input(format!("unknown config key {other:?}"))),
            }
        }
        Ok(c)
    }

    /// Fields set in `over` replace those in `self`.
    pub fn merged(self, over: RunConfig) -> RunConfig {
        RunConfig {
            m: over.m.or(self.m),
            path_depth: over.path_depth.or(self.path_depth),
            gamma_length: over.gamma_length.or(self.gamma_length),
            zeta2: over.zeta2.or(self.zeta2),
            zeta3: over.zeta3.or(self.zeta3),
            t: over.t.or(self.t),
            eps: over.eps.or(self.eps),
            resolution: over.resolution.or(self.resolution),
            out: over.out.or(self.out),
            threads: over.threads.or(self.threads),
            seed: over.seed.or(self.seed),
            trials: over.trials.or(self.trials),
            n: over.n.or(self.n),
            digits: over.digits.or(self.digits),
            family: over.family.or(self.family),
        }
    }

    pub fn m_or(&self, default: usize) -> usize {
        self.m.unwrap_or(default)
    }

    /// Construction parameters for `m`, with every override applied and checked.
    pub fn params(&self, default_m: usize) -> Result<ConstructionParams, CliError> {
        let mut entries = BTreeMap::new();
        if let Some(d) = self.path_depth {
            entries.insert("depth".to_string(), d.to_string());
        }
        if let Some(g) = self.gamma_length {
            entries.insert("gamma_len".to_string(), g.to_string());
        }
        for (key, value) in [("zeta2", &self.zeta2), ("zeta3", &self.zeta3), ("t", &self.t)] {
            if let Some(v) = value {
                entries.insert(key.to_string(), v.clone());
            }
        }
        let params = ConstructionParams::new(self.m_or(default_m)).with_overrides(&entries)?;
        params.validate()?;
        Ok(params)
    }

    pub fn eps(&self) -> Result<Option<ExactScalar>, CliError> {
        self.eps.as_deref().map(parse_scalar).transpose()
    }

    pub fn resolution(&self) -> Result<Option<ExactScalar>, CliError> {
        self.resolution.as_deref().map(parse_scalar).transpose()
    }
}

pub fn parse_scalar(text: &str) -> Result<ExactScalar, CliError> {
    parse_rational(text).map_err(|e| CliError::Input(e.to_string()))
}
