use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::tables::write_atomic;

/// On-disk memo keyed by a hash of input content plus parameters, so editing a
/// network file or changing a parameter misses.
pub struct Cache {
    dir: PathBuf,
    hits: AtomicUsize,
    misses: AtomicUsize,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into(), hits: AtomicUsize::new(0), misses: AtomicUsize::new(0) }
    }

    pub fn key(content: &[u8], params: &[(&str, String)]) -> String {
        let mut h = Sha256::new();
        h.update((content.len() as u64).to_le_bytes());
        h.update(content);
        for (k, v) in params {
            h.update(k.as_bytes());
            h.update([0]);
            h.update(v.as_bytes());
            h.update([0]);
        }
        hex::encode(h.finalize())
    }

    fn path(&self, kind: &str, key: &str) -> PathBuf {
        self.dir.join(kind).join(format!("{key}.json"))
    }

    pub fn get<T: DeserializeOwned>(&self, kind: &str, key: &str) -> Option<T> {
        let value = std::fs::read(self.path(kind, key)).ok().and_then(|b| serde_json::from_slice(&b).ok());
        match value {
            Some(_) => self.hits.fetch_add(1, Ordering::Relaxed),
            None => self.misses.fetch_add(1, Ordering::Relaxed),
        };
        value
    }

    pub fn put<T: Serialize>(&self, kind: &str, key: &str, value: &T) -> anyhow::Result<()> {
        let path = self.path(kind, key);
        std::fs::create_dir_all(path.parent().expect("cache path has a parent"))?;
        write_atomic(&path, &serde_json::to_vec_pretty(value)?)
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> usize {
        self.misses.load(Ordering::Relaxed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_counts() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let k = Cache::key(b"a b\n", &[("rounds", "10".into())]);
        assert_ne!(k, Cache::key(b"a b\n", &[("rounds", "11".into())]));
        assert_ne!(k, Cache::key(b"a c\n", &[("rounds", "10".into())]));
        assert_eq!(cache.get::<f64>("x", &k), None);
        cache.put("x", &k, &0.25).unwrap();
        assert_eq!(cache.get::<f64>("x", &k), Some(0.25));
        assert_eq!((cache.hits(), cache.misses()), (1, 1));
    }
}
