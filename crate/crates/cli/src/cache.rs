//! On-disk cache of computed objects, stored as their canonical JSON.
//!
//! A missing, unreadable or undecodable entry is recomputed; a failed write
//! is reported on stderr and otherwise ignored. Either way the caller gets
//! the same value, so output never depends on the cache state.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::de::DeserializeOwned;
use serde::Serialize;

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

/// File name of a cache entry: `<object>-<k><v>...-<method>.json`,
/// e.g. `bg-g2-n4-r2-i8-convolution.json`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Key {
    object: &'static str,
    parts: Vec<(char, String)>,
    method: &'static str,
}

impl Key {
    pub fn new(object: &'static str, method: &'static str) -> Self {
        Key { object, parts: Vec::new(), method }
    }

    pub fn with(mut self, tag: char, value: impl ToString) -> Self {
        self.parts.push((tag, value.to_string()));
        self
    }

    pub fn file_name(&self) -> String {
        let mut s = self.object.to_string();
        for (tag, v) in &self.parts {
            let _ = write!(s, "-{tag}{v}");
        }
        let _ = write!(s, "-{}.json", self.method);
        s
    }
}

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

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// Returns the cached value for `key`, computing and storing it on a miss.
    pub fn get_or_compute<T, E, F>(&self, key: &Key, compute: F) -> Result<T, E>
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> Result<T, E>,
    {
        let Some(dir) = &self.dir else {
            return compute();
        };
        let path = dir.join(key.file_name());
        if let Ok(text) = fs::read_to_string(&path) {
            match serde_json::from_str(&text) {
                Ok(v) => return Ok(v),
                Err(e) => eprintln!("warning: ignoring cache entry {}: {e}", path.display()),
            }
        }
        let value = compute()?;
        if let Err(e) = store(dir, &path, &value) {
            eprintln!("warning: could not write cache entry {}: {e}", path.display());
        }
        Ok(value)
    }
}

fn store<T: Serialize>(dir: &Path, path: &Path, value: &T) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut text = serde_json::to_string(value)?;
    text.push('\n');
    // write then rename, so concurrent readers never see a partial file
    let n = TMP_COUNTER.fetch_add(1, Ordering::Relaxed);
    let tmp = dir.join(format!(".{}.{}.{n}.tmp", key_stem(path), process::id()));
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)
}

fn key_stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}
