//! File-backed L-value cache: an append-only JSON-lines record file with
//! atomic replace on compaction. Single writer, many readers; entries from
//! other evaluator versions are ignored on load.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use colmez_core::lfunctions::{LValueCache, LValueKey};
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
struct CacheLine {
    conductor: u64,
    char_index: u32,
    quantity: String,
    precision: String,
    version: u32,
    re: f64,
    im: f64,
}

impl CacheLine {
    fn key(&self) -> LValueKey {
        LValueKey {
            conductor: self.conductor,
            char_index: self.char_index,
            quantity: self.quantity.clone(),
            precision: self.precision.clone(),
            version: self.version,
        }
    }

    fn from_entry(key: &LValueKey, value: (f64, f64)) -> Self {
        CacheLine {
            conductor: key.conductor,
            char_index: key.char_index,
            quantity: key.quantity.clone(),
            precision: key.precision.clone(),
            version: key.version,
            re: value.0,
            im: value.1,
        }
    }
}

pub struct FileCache {
    path: PathBuf,
    state: Mutex<CacheState>,
}

struct CacheState {
    map: HashMap<LValueKey, (f64, f64)>,
    writer: Option<File>,
}

impl FileCache {
    /// Open (or create) the record file under the given directory. Stale or
    /// corrupt lines are dropped; if any were seen, the file is compacted
    /// right away.
    pub fn open(dir: &Path) -> std::io::Result<FileCache> {
        fs::create_dir_all(dir)?;
        let path = dir.join("lvalues.jsonl");
        let mut map = HashMap::new();
        let mut dropped = 0usize;
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for line in reader.lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<CacheLine>(&line) {
                    Ok(entry) if entry.version == colmez_core::EVALUATOR_VERSION => {
                        map.insert(entry.key(), (entry.re, entry.im));
                    }
                    _ => dropped += 1,
                }
            }
        }
        let writer = OpenOptions::new().create(true).append(true).open(&path)?;
        let cache = FileCache {
            path,
            state: Mutex::new(CacheState {
                map,
                writer: Some(writer),
            }),
        };
        if dropped > 0 {
            cache.compact()?;
        }
        Ok(cache)
    }

    pub fn len(&self) -> usize {
        self.state.lock().unwrap().map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Rewrite the record file without duplicate keys; atomic replace.
    pub fn compact(&self) -> std::io::Result<()> {
        let mut state = self.state.lock().unwrap();
        let tmp = self.path.with_extension("jsonl.tmp");
        {
            let mut out = File::create(&tmp)?;
            let mut keys: Vec<&LValueKey> = state.map.keys().collect();
            keys.sort();
            for key in keys {
                let value = state.map[key];
                let line = serde_json::to_string(&CacheLine::from_entry(key, value))?;
                writeln!(out, "{line}")?;
            }
            out.sync_all()?;
        }
        fs::rename(&tmp, &self.path)?;
        state.writer = Some(OpenOptions::new().append(true).open(&self.path)?);
        Ok(())
    }
}

impl LValueCache for FileCache {
    fn get(&self, key: &LValueKey) -> Option<(f64, f64)> {
        self.state.lock().unwrap().map.get(key).copied()
    }

    fn put(&self, key: &LValueKey, value: (f64, f64)) {
        let mut state = self.state.lock().unwrap();
        if state.map.insert(key.clone(), value).is_some() {
            return;
        }
        let line = serde_json::to_string(&CacheLine::from_entry(key, value))
            .expect("cache lines serialize");
        if let Some(writer) = state.writer.as_mut() {
            // append failures degrade to an in-memory cache
            let _ = writeln!(writer, "{line}");
        }
    }
}

/// Resolve the cache directory: explicit flag, then the environment
/// variable, then a dot-directory under HOME (or the working directory).
pub fn resolve_cache_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    if let Ok(env) = std::env::var("COLMEZ_CACHE_DIR") {
        if !env.is_empty() {
            return PathBuf::from(env);
        }
    }
    match std::env::var("HOME") {
        Ok(home) if !home.is_empty() => Path::new(&home).join(".cache").join("colmez"),
        _ => PathBuf::from(".colmez-cache"),
    }
}
