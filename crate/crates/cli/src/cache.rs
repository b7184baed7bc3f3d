//! Content-addressed result cache: one JSON file per entry, keyed by the
//! SHA-256 of the canonical scenario and a computation id.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use log::{debug, warn};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use fclab_core::Error;

pub const CACHE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub version: u32,
    /// Canonical scenario JSON the payload was computed from.
    pub scenario: String,
    pub computation: String,
    pub params: Value,
    pub payload: Value,
    /// SHA-256 of the compact payload JSON.
    pub checksum: String,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn checksum(payload: &Value) -> String {
    sha256_hex(payload.to_string().as_bytes())
}

pub fn key(scenario: &str, computation: &str) -> String {
    let mut h = Sha256::new();
    h.update(scenario.as_bytes());
    h.update([0u8]);
    h.update(computation.as_bytes());
    hex::encode(h.finalize())
}

#[derive(Clone, Debug)]
pub struct ResultCache {
    dir: PathBuf,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GcStats {
    pub kept: usize,
    pub removed: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyStats {
    pub entries: usize,
    pub recomputed: usize,
}

impl ResultCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).with_context(|| format!("creating cache dir {}", dir.display()))?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// The entry for `(scenario, computation)` if present and intact.
    pub fn get(&self, scenario: &str, computation: &str) -> Result<Option<Entry>> {
        let k = key(scenario, computation);
        let path = self.path(&k);
        if !path.exists() {
            return Ok(None);
        }
        let e = read_entry(&path)?;
        check_entry(&k, &e)?;
        if e.scenario != scenario || e.computation != computation {
            return Err(Error::CacheCorrupt {
                key: k,
                reason: "entry does not match its key".into(),
            }
            .into());
        }
        Ok(Some(e))
    }

    /// Writes to a temporary file in the cache directory and renames it into
    /// place.
    pub fn put(&self, scenario: &str, computation: &str, params: Value, payload: Value) -> Result<Entry> {
        let e = Entry {
            version: CACHE_VERSION,
            scenario: scenario.to_string(),
            computation: computation.to_string(),
            params,
            checksum: checksum(&payload),
            payload,
        };
        let k = key(scenario, computation);
        let mut tmp = tempfile::Builder::new()
            .prefix(".tmp-")
            .suffix(".json")
            .tempfile_in(&self.dir)?;
        serde_json::to_writer_pretty(&mut tmp, &e)?;
        tmp.write_all(b"\n")?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(&k)).map_err(|e| e.error)?;
        debug!("cached {computation} as {k}");
        Ok(e)
    }

    /// Cached payload or a fresh computation stored on the way out. A damaged
    /// entry is replaced.
    pub fn get_or_compute(
        &self,
        scenario: &str,
        computation: &str,
        params: Value,
        compute: impl FnOnce() -> Result<Value>,
    ) -> Result<(Value, bool)> {
        match self.get(scenario, computation) {
            Ok(Some(e)) => return Ok((e.payload, true)),
            Ok(None) => {}
            Err(err) => warn!("recomputing {computation}: {err:#}"),
        }
        let payload = compute()?;
        self.put(scenario, computation, params, payload.clone())?;
        Ok((payload, false))
    }

    /// Entry files, sorted by key.
    pub fn entries(&self) -> Result<Vec<PathBuf>> {
        let mut out = Vec::new();
        for f in fs::read_dir(&self.dir)? {
            let p = f?.path();
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            if name.ends_with(".json") && !name.starts_with('.') {
                out.push(p);
            }
        }
        out.sort();
        Ok(out)
    }

    /// Removes leftover temporary files and entries that cannot be read or
    /// have another version; with `all`, empties the cache.
    pub fn gc(&self, all: bool) -> Result<GcStats> {
        let mut stats = GcStats::default();
        for f in fs::read_dir(&self.dir)? {
            let p = f?.path();
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("").to_string();
            let stale = all
                || name.starts_with(".tmp-")
                || (name.ends_with(".json")
                    && !read_entry(&p).is_ok_and(|e| {
                        e.version == CACHE_VERSION && check_entry(&key_of(&p), &e).is_ok()
                    }));
            if stale && p.is_file() {
                fs::remove_file(&p)?;
                stats.removed += 1;
            } else {
                stats.kept += 1;
            }
        }
        Ok(stats)
    }

    /// Checks every checksum and recomputes a deterministic tenth of the
    /// entries (at least one), comparing payloads exactly.
    pub fn verify(
        &self,
        recompute: impl Fn(&Entry) -> Result<Value>,
    ) -> Result<VerifyStats> {
        let files = self.entries()?;
        let mut entries = Vec::new();
        for p in &files {
            let k = key_of(p);
            let e = read_entry(p)?;
            check_entry(&k, &e)?;
            entries.push((k, e));
        }
        let n = entries.len();
        let mut stats = VerifyStats {
            entries: n,
            recomputed: 0,
        };
        if n == 0 {
            return Ok(stats);
        }
        let take = n.div_ceil(10);
        for s in 0..take {
            let (k, e) = &entries[s * n / take];
            let fresh = recompute(e)?;
            stats.recomputed += 1;
            if fresh != e.payload {
                return Err(Error::CacheCorrupt {
                    key: k.clone(),
                    reason: format!("recomputed {} differs from the stored payload", e.computation),
                }
                .into());
            }
        }
        Ok(stats)
    }
}

fn key_of(p: &Path) -> String {
    p.file_stem().and_then(|s| s.to_str()).unwrap_or("").to_string()
}

fn read_entry(p: &Path) -> Result<Entry> {
    let text = fs::read_to_string(p)?;
    serde_json::from_str(&text).map_err(|e| {
        Error::CacheCorrupt {
            key: key_of(p),
            reason: format!("unreadable entry: {e}"),
        }
        .into()
    })
}

fn check_entry(k: &str, e: &Entry) -> Result<()> {
    let reason = if e.version != CACHE_VERSION {
        format!("version {} (expected {CACHE_VERSION})", e.version)
    } else if checksum(&e.payload) != e.checksum {
        "checksum mismatch".to_string()
    } else if key(&e.scenario, &e.computation) != k {
        "entry does not match its key".to_string()
    } else {
        return Ok(());
    };
    Err(Error::CacheCorrupt {
        key: k.to_string(),
        reason,
    }
    .into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn put_get_and_keys() {
        let dir = tempfile::tempdir().unwrap();
        let c = ResultCache::open(dir.path()).unwrap();
        assert!(c.get("s", "a").unwrap().is_none());
        c.put("s", "a", json!({}), json!({"v": [1, 2]})).unwrap();
        let e = c.get("s", "a").unwrap().unwrap();
        assert_eq!(e.payload, json!({"v": [1, 2]}));
        assert_ne!(key("s", "a"), key("s", "b"));
        assert_ne!(key("sa", ""), key("s", "a"));
    }

    #[test]
    fn empty_verify_is_noop() {
        let dir = tempfile::tempdir().unwrap();
        let c = ResultCache::open(dir.path()).unwrap();
        let s = c.verify(|_| unreachable!()).unwrap();
        assert_eq!(s, VerifyStats::default());
    }

    #[test]
    fn tampering_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let c = ResultCache::open(dir.path()).unwrap();
        c.put("s", "a", json!({}), json!(5)).unwrap();
        let p = c.path(&key("s", "a"));
        let text = fs::read_to_string(&p).unwrap().replace("\"payload\": 5", "\"payload\": 6");
        fs::write(&p, text).unwrap();
        let err = c.verify(|e| Ok(e.payload.clone())).unwrap_err();
        assert!(matches!(err.downcast_ref::<Error>(), Some(Error::CacheCorrupt { .. })));
        // A wrong recomputation is caught even with an intact checksum.
        c.put("s", "a", json!({}), json!(5)).unwrap();
        assert!(c.verify(|_| Ok(json!(7))).is_err());
        assert_eq!(c.verify(|_| Ok(json!(5))).unwrap().recomputed, 1);
    }

    #[test]
    fn gc_drops_damaged_entries() {
        let dir = tempfile::tempdir().unwrap();
        let c = ResultCache::open(dir.path()).unwrap();
        c.put("s", "a", json!({}), json!(1)).unwrap();
        c.put("s", "b", json!({}), json!(2)).unwrap();
        fs::write(c.path(&key("s", "b")), "{").unwrap();
        fs::write(dir.path().join(".tmp-x.json"), "").unwrap();
        let s = c.gc(false).unwrap();
        assert_eq!(s, GcStats { kept: 1, removed: 2 });
        assert_eq!(c.gc(true).unwrap().removed, 1);
    }
}
