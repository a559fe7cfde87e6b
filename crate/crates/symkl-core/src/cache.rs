//! On-disk cache for Kloosterman tables: canonical JSON with all integers
//! as decimal strings, a sha-256 checksum, schema versioning, and atomic
//! writes via a temp file plus rename.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::kloosterman::{KloostermanTable, TableMethod};

pub const SCHEMA_VERSION: u32 = 1;

/// Serialized Kloosterman table, keyed by (p, a, ext_degree, n, modulus).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub schema_version: u32,
    pub p: String,
    pub a: String,
    /// extension degree of the table field over the base F_q
    pub ext_degree: String,
    pub n: String,
    /// canonical modulus of the table field, low coefficients first
    pub modulus: Vec<String>,
    /// coefficient vector of the canonical generator
    pub generator: Vec<String>,
    /// (element coordinate key, canonical CycInt coordinates), sorted by
    /// element index; the key is the comma-joined coefficient vector
    pub values: Vec<(String, Vec<String>)>,
    pub checksum: String,
}

impl CacheEntry {
    fn payload_digest(&self) -> String {
        let mut clone = self.clone();
        clone.checksum = String::new();
        let bytes = serde_json::to_vec(&clone).expect("cache entry serializes");
        let mut hasher = Sha256::new();
        hasher.update(&bytes);
        hex_string(&hasher.finalize())
    }
}

fn hex_string(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{:02x}", b));
    }
    s
}

fn element_key(field: &FieldDescriptor, idx: u32) -> String {
    let coeffs = field.element_of_index(idx).coeffs;
    coeffs
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn entry_from_table(table: &KloostermanTable) -> CacheEntry {
    let field = table.field();
    let w = field.p() as usize - 1;
    let q = field.order();
    let log = field.dlog_table();
    let mut values = Vec::with_capacity(q as usize - 1);
    for idx in 1..q as u32 {
        let e = log[idx as usize] as usize;
        let coords = table.raw_data()[e * w..(e + 1) * w]
            .iter()
            .map(|v| v.to_string())
            .collect();
        values.push((element_key(field, idx), coords));
    }
    let mut entry = CacheEntry {
        schema_version: SCHEMA_VERSION,
        p: field.p().to_string(),
        a: table.base_a().to_string(),
        ext_degree: (field.degree() / table.base_a()).to_string(),
        n: table.n().to_string(),
        modulus: field.modulus().iter().map(|c| c.to_string()).collect(),
        generator: field
            .generator()
            .coeffs
            .iter()
            .map(|c| c.to_string())
            .collect(),
        values,
        checksum: String::new(),
    };
    entry.checksum = entry.payload_digest();
    entry
}

/// Rebuild a table from an entry against an already-constructed field.
/// The modulus acts as part of the key: a mismatch is reported as a stale
/// entry rather than reinterpreted.
pub fn table_from_entry(
    entry: &CacheEntry,
    field: Arc<FieldDescriptor>,
    expected_a: u32,
    expected_n: u32,
) -> Result<KloostermanTable> {
    if entry.schema_version != SCHEMA_VERSION {
        return Err(Error::Cache(format!(
            "schema version {} is not supported (expected {})",
            entry.schema_version, SCHEMA_VERSION
        )));
    }
    if entry.checksum != entry.payload_digest() {
        return Err(Error::Cache("checksum mismatch".into()));
    }
    let modulus: Vec<String> = field.modulus().iter().map(|c| c.to_string()).collect();
    if entry.p != field.p().to_string()
        || entry.a != expected_a.to_string()
        || entry.n != expected_n.to_string()
        || entry.ext_degree != (field.degree() / expected_a).to_string()
        || entry.modulus != modulus
    {
        return Err(Error::Cache("cache key mismatch".into()));
    }
    let q = field.order();
    let w = field.p() as usize - 1;
    let log = field.dlog_table();
    let mut data = vec![0i64; (q as usize - 1) * w];
    let mut seen = vec![false; q as usize - 1];
    for (key, coords) in &entry.values {
        let coeffs: Vec<u64> = key
            .split(',')
            .map(|s| s.parse::<u64>().map_err(|_| Error::Cache("bad key".into())))
            .collect::<Result<_>>()?;
        if coeffs.len() != field.degree() as usize {
            return Err(Error::Cache("element key has wrong length".into()));
        }
        let idx = field.index_of(&crate::field::FieldElement { coeffs });
        if idx == 0 || idx as u64 >= q {
            return Err(Error::Cache("element key out of range".into()));
        }
        let e = log[idx as usize] as usize;
        if coords.len() != w {
            return Err(Error::Cache("coordinate vector has wrong length".into()));
        }
        for (t, c) in coords.iter().enumerate() {
            data[e * w + t] = c
                .parse::<i64>()
                .map_err(|_| Error::Cache("bad coordinate".into()))?;
        }
        seen[e] = true;
    }
    if !seen.iter().all(|&s| s) {
        return Err(Error::Cache("table values incomplete".into()));
    }
    KloostermanTable::from_raw(field, expected_n, expected_a, TableMethod::Convolution, data)
}

/// Directory of cached tables.
#[derive(Clone, Debug)]
pub struct TableCache {
    dir: PathBuf,
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(TableCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn file_path(&self, p: u64, a: u32, ext_degree: u32, n: u32) -> PathBuf {
        self.dir
            .join(format!("kl_p{}_a{}_l{}_n{}.json", p, a, ext_degree, n))
    }

    /// Ok(None) means a clean miss (no file, or the canonical modulus moved
    /// underneath the key); checksum and version problems are hard errors.
    pub fn load(
        &self,
        field: Arc<FieldDescriptor>,
        a: u32,
        n: u32,
    ) -> Result<Option<KloostermanTable>> {
        let path = self.file_path(field.p(), a, field.degree() / a, n);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let entry: CacheEntry = serde_json::from_slice(&bytes)
            .map_err(|e| Error::Cache(format!("unparseable cache file {:?}: {}", path, e)))?;
        let modulus: Vec<String> = field.modulus().iter().map(|c| c.to_string()).collect();
        if entry.schema_version == SCHEMA_VERSION && entry.modulus != modulus {
            // canonical modulus changed: the key no longer matches
            return Ok(None);
        }
        table_from_entry(&entry, field, a, n).map(Some)
    }

    pub fn store(&self, table: &KloostermanTable) -> Result<PathBuf> {
        let entry = entry_from_table(table);
        let path = self.file_path(
            table.field().p(),
            table.base_a(),
            table.field().degree() / table.base_a(),
            table.n(),
        );
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(&entry).expect("entry serializes"))?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kloosterman::Budgets;

    fn temp_dir(tag: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!(
            "symkl-cache-test-{}-{}",
            tag,
            std::process::id()
        ));
        let _ = fs::remove_dir_all(&dir);
        dir
    }

    fn sample_table() -> (Arc<FieldDescriptor>, KloostermanTable) {
        let f = Arc::new(FieldDescriptor::build(3, 2, 1 << 24).unwrap());
        let t =
            KloostermanTable::build_convolution(f.clone(), 2, 1, &Budgets::default(), false)
                .unwrap();
        (f, t)
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = temp_dir("roundtrip");
        let cache = TableCache::new(&dir).unwrap();
        let (f, t) = sample_table();
        cache.store(&t).unwrap();
        let loaded = cache.load(f, 1, 2).unwrap().expect("cache hit");
        assert_eq!(loaded.raw_data(), t.raw_data());
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn tamper_is_detected() {
        let dir = temp_dir("tamper");
        let cache = TableCache::new(&dir).unwrap();
        let (f, t) = sample_table();
        let path = cache.store(&t).unwrap();
        let mut text = fs::read_to_string(&path).unwrap();
        // flip one digit inside the values payload
        let pos = text.find("\"values\"").unwrap();
        let digit = text[pos..].find(|c: char| c.is_ascii_digit()).unwrap() + pos;
        let orig = text.as_bytes()[digit];
        let replacement = if orig == b'1' { '2' } else { '1' };
        text.replace_range(digit..digit + 1, &replacement.to_string());
        fs::write(&path, text).unwrap();
        let err = cache.load(f, 1, 2).unwrap_err();
        assert!(matches!(err, Error::Cache(_)));
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn version_bump_is_refused() {
        let dir = temp_dir("version");
        let cache = TableCache::new(&dir).unwrap();
        let (f, t) = sample_table();
        let path = cache.store(&t).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let bumped = text.replace(
            &format!("\"schema_version\":{}", SCHEMA_VERSION),
            &format!("\"schema_version\":{}", SCHEMA_VERSION + 1),
        );
        assert_ne!(text, bumped);
        fs::write(&path, bumped).unwrap();
        let err = cache.load(f, 1, 2).unwrap_err();
        assert!(matches!(err, Error::Cache(ref m) if m.contains("schema version")));
        let _ = fs::remove_dir_all(&dir);
    }

    #[test]
    fn missing_file_is_a_miss() {
        let dir = temp_dir("miss");
        let cache = TableCache::new(&dir).unwrap();
        let f = Arc::new(FieldDescriptor::build(3, 2, 1 << 24).unwrap());
        assert!(cache.load(f, 1, 2).unwrap().is_none());
        let _ = fs::remove_dir_all(&dir);
    }
}
