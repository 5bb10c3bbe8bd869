use crate::{Error, Result};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

pub const ENV_JOBS: &str = "KOTTWITZ_JOBS";
pub const ENV_CACHE_DIR: &str = "KOTTWITZ_CACHE_DIR";

/// Defaults for caps and precision, read from a `key = value` file.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub precision: Option<u32>,
    pub depth: u32,
    pub cap: usize,
    pub jobs: Option<usize>,
    pub cache_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config { precision: None, depth: crate::adlv::DEFAULT_MAX_DEPTH, cap: 1 << 22, jobs: None, cache_dir: None }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Config::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: idx + 1, msg: "expected key = value".into() })?;
            let (k, v) = (k.trim(), v.trim());
            let bad = |_| Error::Parse { line: idx + 1, msg: format!("bad value for {k}: {v}") };
            match k {
                "precision" => cfg.precision = Some(v.parse().map_err(bad)?),
                "depth" => cfg.depth = v.parse().map_err(bad)?,
                "cap" => cfg.cap = v.parse().map_err(bad)?,
                "jobs" => cfg.jobs = Some(v.parse().map_err(bad)?),
                "cache_dir" => cfg.cache_dir = Some(PathBuf::from(v)),
                _ => return Err(Error::Parse { line: idx + 1, msg: format!("unknown key {k}") }),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Applies `KOTTWITZ_JOBS` and `KOTTWITZ_CACHE_DIR` from `env`.
    pub fn with_env(mut self, env: impl Fn(&str) -> Option<String>) -> Result<Self> {
        if let Some(j) = env(ENV_JOBS) {
            self.jobs = Some(j.trim().parse().map_err(|_| Error::Invalid(format!("{ENV_JOBS}={j}")))?);
        }
        if let Some(d) = env(ENV_CACHE_DIR) {
            self.cache_dir = Some(PathBuf::from(d));
        }
        Ok(self)
    }
}

/// Flat-file memo keyed by the hash of a request string.
#[derive(Clone, Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        let dir = self.dir.as_ref()?;
        let digest = Sha256::digest(key.as_bytes());
        Some(dir.join(format!("{}.txt", hex::encode(&digest[..16]))))
    }

    /// Returns the stored value for `key` or computes and stores it. The key
    /// is written on the first line so collisions are detected.
    pub fn get_or_compute(&self, key: &str, compute: impl FnOnce() -> Result<String>) -> Result<String> {
        let Some(path) = self.path(key) else {
            return compute();
        };
        if let Ok(text) = std::fs::read_to_string(&path) {
            if let Some((k, v)) = text.split_once('\n') {
                if k == key {
                    return Ok(v.to_string());
                }
            }
        }
        let v = compute()?;
        std::fs::create_dir_all(path.parent().unwrap()).map_err(|e| Error::Io(e.to_string()))?;
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, format!("{key}\n{v}")).map_err(|e| Error::Io(e.to_string()))?;
        std::fs::rename(&tmp, &path).map_err(|e| Error::Io(e.to_string()))?;
        Ok(v)
    }
}
