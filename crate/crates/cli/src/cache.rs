//! Append-only, line-delimited JSON cache of maximization results.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub mode: String,
    pub patterns: String,
    pub n: usize,
    pub k: usize,
    pub space: String,
    pub witness_limit: usize,
    pub mu: u64,
    pub density: String,
    pub primary_witness: Option<String>,
    pub witnesses: Vec<String>,
    pub witness_total: u64,
    pub examined: u64,
    pub engine_version: String,
    pub timestamp: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub mode: String,
    pub patterns: String,
    pub n: usize,
    pub k: usize,
    pub space: String,
    pub witness_limit: usize,
    pub engine_version: String,
}

impl CacheRecord {
    pub fn key(&self) -> CacheKey {
        CacheKey {
            mode: self.mode.clone(),
            patterns: self.patterns.clone(),
            n: self.n,
            k: self.k,
            space: self.space.clone(),
            witness_limit: self.witness_limit,
            engine_version: self.engine_version.clone(),
        }
    }
}

pub struct Cache {
    path: PathBuf,
    records: HashMap<CacheKey, CacheRecord>,
}

impl Cache {
    /// Reads the cache at `path`; a missing file is an empty cache. Lines
    /// that do not parse are skipped with a warning on stderr.
    pub fn open(path: &Path) -> Result<Self> {
        let mut records = HashMap::new();
        match File::open(path) {
            Ok(file) => {
                for (i, line) in BufReader::new(file).lines().enumerate() {
                    let line = line.with_context(|| format!("reading cache {}", path.display()))?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    match serde_json::from_str::<CacheRecord>(&line) {
                        Ok(rec) => {
                            records.entry(rec.key()).or_insert(rec);
                        }
                        Err(e) => eprintln!(
                            "warning: skipping corrupted cache line {} in {}: {e}",
                            i + 1,
                            path.display()
                        ),
                    }
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(e).with_context(|| format!("opening cache {}", path.display())),
        }
        Ok(Cache {
            path: path.to_path_buf(),
            records,
        })
    }

    pub fn get(&self, key: &CacheKey) -> Option<&CacheRecord> {
        self.records.get(key)
    }

    #[cfg(test)]
    fn len(&self) -> usize {
        self.records.len()
    }

    /// Appends `record` unless a record with the same key is already
    /// present.
    pub fn insert(&mut self, record: CacheRecord) -> Result<()> {
        let key = record.key();
        if self.records.contains_key(&key) {
            return Ok(());
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .with_context(|| format!("opening cache {} for append", self.path.display()))?;
        let mut line = serde_json::to_string(&record)?;
        line.push('\n');
        file.write_all(line.as_bytes())
            .with_context(|| format!("writing cache {}", self.path.display()))?;
        self.records.insert(key, record);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(mu: u64) -> CacheRecord {
        CacheRecord {
            mode: "unrestricted".into(),
            patterns: "121".into(),
            n: 5,
            k: 5,
            space: "all".into(),
            witness_limit: 100,
            mu,
            density: "1/2".into(),
            primary_witness: Some("12121".into()),
            witnesses: vec!["12121".into()],
            witness_total: 1,
            examined: 52,
            engine_version: "0.1.0".into(),
            timestamp: 0,
        }
    }

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let mut cache = Cache::open(&path).unwrap();
        assert_eq!(cache.len(), 0);
        cache.insert(record(5)).unwrap();
        cache.insert(record(6)).unwrap();
        std::fs::OpenOptions::new()
            .append(true)
            .open(&path)
            .unwrap()
            .write_all(b"{not json\n")
            .unwrap();
        let reopened = Cache::open(&path).unwrap();
        assert_eq!(reopened.len(), 1);
        assert_eq!(reopened.get(&record(0).key()).unwrap().mu, 5);
    }
}
