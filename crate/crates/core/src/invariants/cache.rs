use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Environment variable naming the default cache directory.
pub const CACHE_ENV: &str = "QUIVERWC_CACHE";

/// Content-addressed store of computed invariants, one JSON file per key.
#[derive(Clone, Debug)]
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    pub fn new(dir: impl AsRef<Path>) -> Result<Self> {
        fs::create_dir_all(dir.as_ref()).map_err(|e| Error::input(format!("cache dir: {e}")))?;
        Ok(DiskCache { dir: dir.as_ref().to_path_buf() })
    }

    /// Cache named by `QUIVERWC_CACHE`, if set.
    pub fn from_env() -> Result<Option<Self>> {
        match std::env::var_os(CACHE_ENV) {
            Some(p) if !p.is_empty() => Ok(Some(Self::new(p)?)),
            _ => Ok(None),
        }
    }

    pub fn key(parts: &[&str]) -> String {
        let mut h = Sha256::new();
        for p in parts {
            h.update(p.as_bytes());
            h.update([0u8]);
        }
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// Stored payload, if present and well formed; a corrupt file is a miss.
    pub fn load(&self, key: &str) -> Option<Value> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let v: Value = serde_json::from_str(&text).ok()?;
        if v["key"].as_str() != Some(key) {
            return None;
        }
        Some(v["value"].clone())
    }

    /// Writes atomically via a temporary file; concurrent writers of the same
    /// key store identical bytes, so the last rename wins harmlessly.
    pub fn store(&self, key: &str, value: &Value) -> Result<()> {
        let body = json!({"key": key, "value": value});
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        let text = serde_json::to_string(&body).map_err(|e| Error::input(e.to_string()))?;
        fs::write(&tmp, text).map_err(|e| Error::input(format!("cache write: {e}")))?;
        fs::rename(&tmp, self.path(key)).map_err(|e| Error::input(format!("cache write: {e}")))?;
        Ok(())
    }
}
