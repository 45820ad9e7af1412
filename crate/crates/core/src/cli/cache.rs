//! Optional on-disk cache of rendered outputs, keyed by a hash of the full
//! configuration. Enabled by `GREEN_IDEALS_CACHE=<dir>`.

use std::path::PathBuf;

use sha2::{Digest, Sha256};

pub const ENV_VAR: &str = "GREEN_IDEALS_CACHE";

pub struct Cache {
    dir: PathBuf,
}

fn digest(key: &str) -> String {
    Sha256::digest(key.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

impl Cache {
    pub fn from_env() -> Option<Cache> {
        let dir = std::env::var_os(ENV_VAR).filter(|d| !d.is_empty())?;
        Some(Cache { dir: PathBuf::from(dir) })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{}.out", digest(key)))
    }

    pub fn get(&self, key: &str) -> Option<String> {
        std::fs::read_to_string(self.path(key)).ok()
    }

    /// Best effort: a cache that cannot be written is skipped.
    pub fn put(&self, key: &str, text: &str) {
        if std::fs::create_dir_all(&self.dir).is_err() {
            return;
        }
        let path = self.path(key);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        if std::fs::write(&tmp, text).is_ok() {
            let _ = std::fs::rename(&tmp, &path);
        }
    }
}
