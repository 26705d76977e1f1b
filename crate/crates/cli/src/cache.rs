//! Presentation cache: an in-memory layer over an optional directory of
//! content-hashed group records.
//!
//! Entries are written to a temporary file and renamed into place. A file
//! whose hash, key or contents fail to check is treated as a miss and
//! overwritten after recomputation. Failures never abort a command.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use rbloch_core::abelian::{FPGroup, GroupRecord};
use rbloch_core::bloch::{BlochPresentation, PreBloch, RefinedPreBloch};
use rbloch_core::fields::FiniteField;
use rbloch_core::Exec;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::report::CacheStats;

/// Bumped whenever presentations or the record layout change.
const FORMAT: &str = "v1";

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    sha256: String,
    payload: String,
}

fn digest(key: &str, payload: &str) -> String {
    let mut h = Sha256::new();
    h.update(key.as_bytes());
    h.update([0]);
    h.update(payload.as_bytes());
    hex::encode(h.finalize())
}

pub struct Cache {
    dir: Option<PathBuf>,
    hits: AtomicU64,
    misses: AtomicU64,
    writes: AtomicU64,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        let dir = dir.and_then(|d| match fs::create_dir_all(&d) {
            Ok(()) => Some(d),
            Err(e) => {
                eprintln!(
                    "warning: cache disabled, cannot create {}: {e}",
                    d.display()
                );
                None
            }
        });
        Cache {
            dir,
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
            writes: AtomicU64::new(0),
        }
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            enabled: self.dir.is_some(),
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            writes: self.writes.load(Ordering::Relaxed),
        }
    }

    pub fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir
            .as_ref()
            .map(|d| d.join(format!("{FORMAT}-{key}.json")))
    }

    fn read(path: &Path, key: &str) -> Option<GroupRecord> {
        let entry: Entry = serde_json::from_str(&fs::read_to_string(path).ok()?).ok()?;
        if entry.key != key || entry.sha256 != digest(key, &entry.payload) {
            return None;
        }
        serde_json::from_str(&entry.payload).ok()
    }

    /// A cached group accepted by `validate`, or `None` (counted as a miss).
    pub fn get<T>(&self, key: &str, validate: impl FnOnce(GroupRecord) -> Option<T>) -> Option<T> {
        let found = self
            .path(key)
            .and_then(|path| Self::read(&path, key))
            .and_then(validate);
        match found {
            Some(v) => {
                self.hits.fetch_add(1, Ordering::Relaxed);
                Some(v)
            }
            None => {
                self.misses.fetch_add(1, Ordering::Relaxed);
                None
            }
        }
    }

    pub fn put(&self, key: &str, group: &FPGroup) {
        let Some(path) = self.path(key) else { return };
        let payload = serde_json::to_string(&group.to_record()).expect("records serialize");
        let entry = Entry {
            key: key.to_string(),
            sha256: digest(key, &payload),
            payload,
        };
        let dir = path
            .parent()
            .expect("cache files live in the cache directory");
        let result = tempfile::NamedTempFile::new_in(dir).and_then(|mut f| {
            f.write_all(
                serde_json::to_string(&entry)
                    .expect("entries serialize")
                    .as_bytes(),
            )?;
            f.persist(&path).map_err(|e| e.error)?;
            Ok(())
        });
        match result {
            Ok(()) => {
                self.writes.fetch_add(1, Ordering::Relaxed);
            }
            Err(e) => eprintln!("warning: cannot write cache entry {}: {e}", path.display()),
        }
    }
}

/// Presentations built during one run, shared between commands.
pub struct Store {
    pub cache: Cache,
    pub exec: Exec,
    pre: Mutex<HashMap<u64, Arc<PreBloch>>>,
    refined: Mutex<HashMap<u64, Arc<RefinedPreBloch>>>,
}

impl Store {
    pub fn new(cache: Cache, exec: Exec) -> Self {
        Store {
            cache,
            exec,
            pre: Mutex::default(),
            refined: Mutex::default(),
        }
    }

    pub fn field(&self, q: u64) -> anyhow::Result<Arc<FiniteField>> {
        Ok(Arc::new(FiniteField::of_order(q)?))
    }

    pub fn pre_bloch(&self, q: u64) -> anyhow::Result<Arc<PreBloch>> {
        if let Some(p) = self.pre.lock().expect("poisoned").get(&q) {
            return Ok(p.clone());
        }
        let k = self.field(q)?;
        let key = format!("pb-q{q}");
        let p = match self.cache.get(&key, |rec| {
            PreBloch::from_group(k.clone(), FPGroup::from_record(&rec).ok()?).ok()
        }) {
            Some(p) => p,
            None => {
                let p = PreBloch::with_exec(k, self.exec);
                self.cache.put(&key, p.group());
                p
            }
        };
        let p = Arc::new(p);
        self.pre.lock().expect("poisoned").insert(q, p.clone());
        Ok(p)
    }

    pub fn refined_pre_bloch(&self, q: u64) -> anyhow::Result<Arc<RefinedPreBloch>> {
        if let Some(p) = self.refined.lock().expect("poisoned").get(&q) {
            return Ok(p.clone());
        }
        let k = self.field(q)?;
        let key = format!("rpb-q{q}");
        let rp = match self.cache.get(&key, |rec| {
            RefinedPreBloch::from_group(k.clone(), FPGroup::from_record(&rec).ok()?).ok()
        }) {
            Some(p) => p,
            None => {
                let p = RefinedPreBloch::with_exec(k, self.exec)?;
                self.cache.put(&key, p.group());
                p
            }
        };
        let rp = Arc::new(rp);
        self.refined.lock().expect("poisoned").insert(q, rp.clone());
        Ok(rp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::new(Cache::new(Some(dir.path().to_path_buf())), Exec::Sequential);
        let a = store.pre_bloch(7).unwrap();
        assert_eq!(store.cache.stats().misses, 1);
        assert_eq!(store.cache.stats().writes, 1);

        let fresh = Store::new(Cache::new(Some(dir.path().to_path_buf())), Exec::Sequential);
        let b = fresh.pre_bloch(7).unwrap();
        assert_eq!(fresh.cache.stats().hits, 1);
        assert_eq!(a.group().structure(), b.group().structure());

        let path = fresh.cache.path("pb-q7").unwrap();
        let text =
            fs::read_to_string(&path)
                .unwrap()
                .replacen("\\\"labels\\\"", "\\\"label\\\"", 1);
        fs::write(&path, text).unwrap();
        let again = Store::new(Cache::new(Some(dir.path().to_path_buf())), Exec::Sequential);
        again.pre_bloch(7).unwrap();
        assert_eq!(
            (
                again.cache.stats().hits,
                again.cache.stats().misses,
                again.cache.stats().writes
            ),
            (0, 1, 1)
        );
    }

    #[test]
    fn disabled_cache_never_hits() {
        let store = Store::new(Cache::new(None), Exec::Sequential);
        store.pre_bloch(5).unwrap();
        let s = store.cache.stats();
        assert!(!s.enabled);
        assert_eq!((s.hits, s.misses, s.writes), (0, 1, 0));
    }
}
