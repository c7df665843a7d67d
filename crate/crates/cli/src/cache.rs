//! Append-only JSON-lines result cache.
//!
//! The whole file is indexed on open. Later lines win. Lines that fail to
//! parse are skipped with a warning. Records written by a different major
//! tool version are ignored.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, ErrorKind, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use crate::record::{CacheKey, ResultRecord, TOOL_VERSION};

pub const CACHE_ENV: &str = "DAVLAB_CACHE";
pub const DEFAULT_CACHE_FILE: &str = "davlab-cache.jsonl";

pub struct Cache {
    path: PathBuf,
    entries: HashMap<CacheKey, ResultRecord>,
    skipped: usize,
}

fn major(version: &str) -> &str {
    version.split('.').next().unwrap_or(version)
}

impl Cache {
    /// `--cache` if given, else `DAVLAB_CACHE`, else `./davlab-cache.jsonl`.
    pub fn resolve_path(flag: Option<&Path>) -> PathBuf {
        flag.map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_FILE))
    }

    /// A missing file is an empty cache.
    pub fn open(path: &Path) -> Result<Cache> {
        let mut cache = Cache { path: path.to_path_buf(), entries: HashMap::new(), skipped: 0 };
        let file = match File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(e).with_context(|| format!("cannot read cache {}", path.display())),
        };
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = match line {
                Ok(l) => l,
                Err(e) => {
                    log::warn!("{}:{}: unreadable line skipped: {e}", path.display(), n + 1);
                    cache.skipped += 1;
                    continue;
                }
            };
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<ResultRecord>(&line) {
                Ok(r) if major(&r.tool_version) == major(TOOL_VERSION) => {
                    cache.entries.insert(r.key(), r);
                }
                Ok(_) => {}
                Err(e) => {
                    log::warn!("{}:{}: corrupt cache line skipped: {e}", path.display(), n + 1);
                    cache.skipped += 1;
                }
            }
        }
        Ok(cache)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Lines skipped as corrupt while opening.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Latest record under `key`, exact or not.
    pub fn get(&self, key: &CacheKey) -> Option<&ResultRecord> {
        self.entries.get(key)
    }

    /// Latest record under `key` if it is exact; inexact results are misses.
    pub fn get_exact(&self, key: &CacheKey) -> Option<&ResultRecord> {
        self.get(key).filter(|r| r.exact)
    }

    /// Appends one line with a single write.
    pub fn put(&mut self, record: ResultRecord) -> Result<()> {
        let mut line = serde_json::to_string(&record)?;
        line.push('\n');
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .with_context(|| format!("cannot write cache {}", self.path.display()))?;
        file.write_all(line.as_bytes()).with_context(|| format!("cannot write cache {}", self.path.display()))?;
        self.entries.insert(record.key(), record);
        Ok(())
    }
}
