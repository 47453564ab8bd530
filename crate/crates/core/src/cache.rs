//! Shared store of built `NHRep`s with an optional on-disk cache.
//!
//! Disk layout: one binary blob per `(n, l, p)` plus `manifest.json` recording the
//! format version, dimensions and a SHA-256 checksum for each blob. Every write goes
//! to a temporary file in the same directory followed by a rename. The cache is
//! advisory: unreadable, mismatched or corrupted entries are discarded and rebuilt.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::nilhecke::NHRep;

/// Bumping this makes every existing blob invisible.
pub const CACHE_VERSION: u32 = 1;
/// Overrides the cache directory.
pub const CACHE_DIR_ENV: &str = "NILCAT_CACHE_DIR";

const MAGIC: &[u8; 8] = b"NILCATNH";
const MANIFEST: &str = "manifest.json";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ManifestEntry {
    pub file: String,
    pub n: usize,
    pub l: usize,
    pub p: u32,
    pub dim: usize,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Manifest {
    pub version: u32,
    pub entries: BTreeMap<String, ManifestEntry>,
}

impl Default for Manifest {
    fn default() -> Self {
        Manifest { version: CACHE_VERSION, entries: BTreeMap::new() }
    }
}

/// Outcome of checking every manifest entry against its blob.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CacheReport {
    pub dir: String,
    pub valid: Vec<String>,
    pub invalid: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct DiskCache {
    dir: PathBuf,
}

pub fn entry_key(n: usize, l: usize, p: u32) -> String {
    format!("nh-n{n}-l{l}-p{p}")
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Write `bytes` to `path` through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().ok_or_else(|| Error::Param(format!("no parent for {}", path.display())))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

impl DiskCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(DiskCache { dir })
    }

    /// `$NILCAT_CACHE_DIR`, else `$XDG_CACHE_HOME/nilcat`, else `$HOME/.cache/nilcat`.
    pub fn default_dir() -> Option<PathBuf> {
        if let Some(d) = std::env::var_os(CACHE_DIR_ENV) {
            return Some(PathBuf::from(d));
        }
        if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
            return Some(PathBuf::from(d).join("nilcat"));
        }
        std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("nilcat"))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// The manifest, or an empty one if missing, unparsable or from another version.
    pub fn manifest(&self) -> Manifest {
        fs::read(self.dir.join(MANIFEST))
            .ok()
            .and_then(|b| serde_json::from_slice::<Manifest>(&b).ok())
            .filter(|m| m.version == CACHE_VERSION)
            .unwrap_or_default()
    }

    fn write_manifest(&self, m: &Manifest) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(m)?;
        bytes.push(b'\n');
        write_atomic(&self.dir.join(MANIFEST), &bytes)
    }

    pub fn store(&self, rep: &NHRep) -> Result<()> {
        let bytes = encode_rep(rep);
        let key = entry_key(rep.n, rep.l, rep.p());
        let file = format!("{key}.v{CACHE_VERSION}.bin");
        write_atomic(&self.dir.join(&file), &bytes)?;
        // Serializes read-modify-write of the manifest within this process.
        static MANIFEST_LOCK: Mutex<()> = Mutex::new(());
        let _guard = MANIFEST_LOCK.lock().expect("manifest lock poisoned");
        let mut m = self.manifest();
        m.entries.insert(
            key,
            ManifestEntry {
                file,
                n: rep.n,
                l: rep.l,
                p: rep.p(),
                dim: rep.dim(),
                bytes: bytes.len(),
                sha256: sha256_hex(&bytes),
            },
        );
        self.write_manifest(&m)
    }

    /// `Ok(None)` on any miss, including checksum or decode failures.
    pub fn load(&self, n: usize, l: usize, p: u32) -> Result<Option<NHRep>> {
        let m = self.manifest();
        let Some(entry) = m.entries.get(&entry_key(n, l, p)) else {
            return Ok(None);
        };
        let Ok(bytes) = fs::read(self.dir.join(&entry.file)) else {
            return Ok(None);
        };
        if bytes.len() != entry.bytes || sha256_hex(&bytes) != entry.sha256 {
            return Ok(None);
        }
        match decode_rep(&bytes) {
            Ok(rep) if rep.n == n && rep.l == l && rep.p() == p && rep.dim() == entry.dim => Ok(Some(rep)),
            _ => Ok(None),
        }
    }

    pub fn verify(&self) -> CacheReport {
        let m = self.manifest();
        let mut valid = Vec::new();
        let mut invalid = Vec::new();
        for (key, e) in &m.entries {
            let ok = matches!(self.load(e.n, e.l, e.p), Ok(Some(_)));
            if ok { valid.push(key.clone()) } else { invalid.push(key.clone()) }
        }
        CacheReport { dir: self.dir.display().to_string(), valid, invalid }
    }

    /// Remove every blob named in the manifest and the manifest itself.
    pub fn clear(&self) -> Result<usize> {
        let m = self.manifest();
        for e in m.entries.values() {
            let _ = fs::remove_file(self.dir.join(&e.file));
        }
        let _ = fs::remove_file(self.dir.join(MANIFEST));
        Ok(m.entries.len())
    }
}

fn put_u32(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_le_bytes());
}

fn put_matrix(out: &mut Vec<u8>, m: &Matrix) {
    put_u32(out, m.rows as u32);
    put_u32(out, m.cols as u32);
    for &x in &m.data {
        put_u32(out, x);
    }
}

/// Header, generator matrices, then the differential matrix.
pub fn encode_rep(rep: &NHRep) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    put_u32(&mut out, CACHE_VERSION);
    put_u32(&mut out, rep.n as u32);
    put_u32(&mut out, rep.l as u32);
    put_u32(&mut out, rep.p());
    let (ys, psis) = rep.generator_mats();
    for m in ys.iter().chain(psis) {
        put_matrix(&mut out, m);
    }
    put_matrix(&mut out, rep.differential_matrix());
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn u32(&mut self) -> Result<u32> {
        let end = self.pos + 4;
        let chunk = self.bytes.get(self.pos..end).ok_or_else(|| Error::Internal("truncated blob".into()))?;
        self.pos = end;
        Ok(u32::from_le_bytes(chunk.try_into().expect("4 bytes")))
    }

    fn matrix(&mut self) -> Result<Matrix> {
        let rows = self.u32()? as usize;
        let cols = self.u32()? as usize;
        let data = (0..rows * cols).map(|_| self.u32()).collect::<Result<Vec<u32>>>()?;
        Ok(Matrix { rows, cols, data })
    }
}

pub fn decode_rep(bytes: &[u8]) -> Result<NHRep> {
    if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
        return Err(Error::Internal("bad blob header".into()));
    }
    let mut r = Reader { bytes, pos: MAGIC.len() };
    if r.u32()? != CACHE_VERSION {
        return Err(Error::Internal("blob version mismatch".into()));
    }
    let n = r.u32()? as usize;
    let l = r.u32()? as usize;
    let p = r.u32()?;
    let ys = (0..n).map(|_| r.matrix()).collect::<Result<Vec<_>>>()?;
    let psis = (0..n.saturating_sub(1)).map(|_| r.matrix()).collect::<Result<Vec<_>>>()?;
    let diff = r.matrix()?;
    if r.pos != bytes.len() {
        return Err(Error::Internal("trailing bytes in blob".into()));
    }
    NHRep::from_generators(n, l, p, ys, psis, Some(diff))
}

/// Process-wide map `(n, l, p) -> Arc<NHRep>`, backed by an optional disk cache.
#[derive(Default)]
pub struct RepStore {
    reps: Mutex<HashMap<(usize, usize, u32), Arc<NHRep>>>,
    disk: Option<DiskCache>,
}

impl RepStore {
    pub fn in_memory() -> Self {
        RepStore::default()
    }

    pub fn with_disk(disk: DiskCache) -> Self {
        RepStore { reps: Mutex::new(HashMap::new()), disk: Some(disk) }
    }

    pub fn disk(&self) -> Option<&DiskCache> {
        self.disk.as_ref()
    }

    pub fn get(&self, n: usize, l: usize, p: u32) -> Result<Arc<NHRep>> {
        if let Some(r) = self.reps.lock().expect("rep store poisoned").get(&(n, l, p)) {
            return Ok(r.clone());
        }
        let rep = match self.disk.as_ref().map(|d| d.load(n, l, p)).transpose()?.flatten() {
            Some(rep) => rep,
            None => {
                let rep = NHRep::build(n, l, p)?;
                if let Some(d) = &self.disk {
                    // Advisory: a failed write only costs a rebuild next time.
                    if let Err(e) = d.store(&rep) {
                        eprintln!("warning: cache write failed: {e}");
                    }
                }
                rep
            }
        };
        let rep = Arc::new(rep);
        self.reps.lock().expect("rep store poisoned").entry((n, l, p)).or_insert(rep.clone());
        Ok(rep)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_identical() {
        let rep = NHRep::build(2, 3, 3).unwrap();
        let bytes = encode_rep(&rep);
        let back = decode_rep(&bytes).unwrap();
        assert_eq!(rep.generator_mats(), back.generator_mats());
        assert_eq!(rep.differential_matrix(), back.differential_matrix());
        assert_eq!(encode_rep(&back), bytes);
    }

    #[test]
    fn truncated_blob_is_rejected() {
        let bytes = encode_rep(&NHRep::build(1, 2, 2).unwrap());
        assert!(decode_rep(&bytes[..bytes.len() - 3]).is_err());
        assert!(decode_rep(b"garbage").is_err());
    }
}
