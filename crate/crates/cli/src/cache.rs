//! Content-addressed result cache.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::output::Artifacts;

pub const CACHE_DIR_ENV: &str = "PSH_CACHE_DIR";
pub const NO_CACHE_ENV: &str = "PSH_NO_CACHE";
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub payload: Artifacts,
    #[serde(rename = "createdAt")]
    pub created_at: u64,
}

/// SHA-256 over the operation, canonical parameters and code version.
pub fn cache_key(operation: &str, canonical_params: &str) -> String {
    let mut h = Sha256::new();
    for part in ["psh", CODE_VERSION, operation, canonical_params] {
        h.update(part.as_bytes());
        h.update([0u8]);
    }
    format!("{:x}", h.finalize())
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    /// `None` when `PSH_NO_CACHE` is set to anything but `0` or empty.
    pub fn from_env() -> Option<Self> {
        if std::env::var(NO_CACHE_ENV).is_ok_and(|v| !v.is_empty() && v != "0") {
            return None;
        }
        let dir = match std::env::var_os(CACHE_DIR_ENV) {
            Some(d) => PathBuf::from(d),
            None => match std::env::var_os("XDG_CACHE_HOME") {
                Some(x) => PathBuf::from(x).join("psh"),
                None => match std::env::var_os("HOME") {
                    Some(h) => PathBuf::from(h).join(".cache").join("psh"),
                    None => PathBuf::from(".psh-cache"),
                },
            },
        };
        Some(Cache { dir })
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Option<Artifacts> {
        let text = std::fs::read_to_string(self.path(key)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        (entry.key == key).then_some(entry.payload)
    }

    /// Writes to a temporary file in the cache directory, then renames.
    pub fn put(&self, key: &str, payload: &Artifacts) -> std::io::Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let entry = CacheEntry {
            key: key.to_string(),
            payload: payload.clone(),
            created_at: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        {
            let mut f = std::fs::File::create(&tmp)?;
            f.write_all(serde_json::to_string(&entry)?.as_bytes())?;
            f.sync_all()?;
        }
        std::fs::rename(&tmp, self.path(key))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_depends_on_every_part() {
        let a = cache_key("norm", "p=2\n");
        assert_eq!(a, cache_key("norm", "p=2\n"));
        assert_ne!(a, cache_key("weight", "p=2\n"));
        assert_ne!(a, cache_key("norm", "p=1\n"));
        assert_eq!(a.len(), 64);
    }
}
