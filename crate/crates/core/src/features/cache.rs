use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::CanonicalKey;
use crate::spasm::{BasisDocument, LinearCombination};

/// Persistent store of computed bases, one JSON file per
/// `<dir>/<mode>/<canonical key>.json`.
///
/// Each file carries a SHA-256 of its basis document; a file that fails to
/// parse or verify is a miss.
#[derive(Clone, Debug)]
pub struct BasisCache {
    dir: PathBuf,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    checksum: String,
    basis: BasisDocument,
}

static TMP_SEQ: AtomicU64 = AtomicU64::new(0);

fn checksum(doc: &BasisDocument) -> Result<String> {
    let bytes = serde_json::to_vec(doc)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

impl BasisCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        BasisCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &CanonicalKey, mode: &str) -> PathBuf {
        self.dir.join(mode).join(format!("{key}.json"))
    }

    pub fn get(&self, key: &CanonicalKey, mode: &str) -> Option<LinearCombination> {
        let text = fs::read_to_string(self.path_for(key, mode)).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        if checksum(&entry.basis).ok()? != entry.checksum {
            return None;
        }
        LinearCombination::from_document(&entry.basis).ok()
    }

    /// Writes through a temporary file and renames, so readers never see a
    /// partial entry.
    pub fn put(&self, key: &CanonicalKey, mode: &str, basis: &LinearCombination) -> Result<()> {
        let path = self.path_for(key, mode);
        let parent = path.parent().expect("cache paths have a parent");
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        let doc = basis.to_document();
        let entry = Entry {
            checksum: checksum(&doc)?,
            basis: doc,
        };
        let tmp = path.with_extension(format!(
            "json.{}.{}.tmp",
            std::process::id(),
            TMP_SEQ.fetch_add(1, Ordering::Relaxed)
        ));
        fs::write(&tmp, serde_json::to_vec_pretty(&entry)?).map_err(|e| Error::io(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))
    }

    /// Cached basis, or `compute()` stored for next time. A failed write is
    /// not an error: the computed basis is still returned.
    pub fn get_or_compute(
        &self,
        key: &CanonicalKey,
        mode: &str,
        compute: impl FnOnce() -> Result<LinearCombination>,
    ) -> Result<LinearCombination> {
        if let Some(hit) = self.get(key, mode) {
            return Ok(hit);
        }
        let basis = compute()?;
        let _ = self.put(key, mode, &basis);
        Ok(basis)
    }
}
