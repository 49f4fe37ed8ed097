//! On-disk cache of component bases, layered over the in-memory memo.
//!
//! One JSON file per `(label, charge2, weight4, version)`. Files are written
//! to a temporary name in the cache directory and renamed into place, so a
//! reader never sees a partial entry.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use rrvoa_core::principal::{component_basis, enumerate_monomials};
use rrvoa_core::{
    Bidegree, ComponentProvider, Error, GradedComponentBasis, Label, MemoProvider, Result,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: usize,
    pub misses: usize,
    pub corrupt: usize,
}

pub struct DiskCache {
    dir: Option<PathBuf>,
    version: String,
    memo: MemoProvider,
    hits: AtomicUsize,
    misses: AtomicUsize,
    corrupt: AtomicUsize,
}

impl DiskCache {
    /// In-memory only.
    pub fn memory() -> Self {
        Self::with_version(None, rrvoa_core::CODE_VERSION)
    }

    pub fn new(dir: Option<PathBuf>) -> Self {
        Self::with_version(dir, rrvoa_core::CODE_VERSION)
    }

    pub fn with_version(dir: Option<PathBuf>, version: &str) -> Self {
        DiskCache {
            dir,
            version: version.to_string(),
            memo: MemoProvider::new(),
            hits: AtomicUsize::new(0),
            misses: AtomicUsize::new(0),
            corrupt: AtomicUsize::new(0),
        }
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
            corrupt: self.corrupt.load(Ordering::Relaxed),
        }
    }

    pub fn entry_path(&self, label: Label, at: Bidegree) -> Option<PathBuf> {
        let name = format!(
            "{}_c{}_w{}_v{}.json",
            label.name(),
            at.charge2,
            at.weight4,
            self.version
        );
        self.dir.as_ref().map(|d| d.join(name))
    }

    fn load_or_compute(&self, label: Label, at: Bidegree) -> Result<GradedComponentBasis> {
        let Some(path) = self.entry_path(label, at) else {
            return component_basis(label, at);
        };
        if path.exists() {
            match read_entry(&path, label, at) {
                Ok(basis) => {
                    self.hits.fetch_add(1, Ordering::Relaxed);
                    return Ok(basis);
                }
                Err(e) => {
                    self.corrupt.fetch_add(1, Ordering::Relaxed);
                    eprintln!("warning: discarding cache entry {}: {e}", path.display());
                }
            }
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let basis = component_basis(label, at)?;
        write_entry(&path, &basis)?;
        Ok(basis)
    }
}

fn read_entry(path: &Path, label: Label, at: Bidegree) -> Result<GradedComponentBasis> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(e.to_string()))?;
    let basis: GradedComponentBasis =
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    if basis.label != label || basis.bidegree != at {
        return Err(Error::Parse(format!(
            "entry holds {} at {}",
            basis.label, basis.bidegree
        )));
    }
    let expected: Vec<_> = match label.charge_and_offset(at) {
        Ok((r, s)) => enumerate_monomials(label, r, s),
        Err(_) => Vec::new(),
    };
    let stored: Vec<_> = basis.spanning.iter().map(|(m, _)| m.clone()).collect();
    if stored != expected {
        return Err(Error::Parse("spanning monomials do not match".into()));
    }
    basis.validate()?;
    Ok(basis)
}

fn write_entry(path: &Path, basis: &GradedComponentBasis) -> Result<()> {
    let io = |e: std::io::Error| Error::Usage(format!("cache write to {}: {e}", path.display()));
    let dir = path.parent().expect("entry paths have a parent");
    fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    let text = serde_json::to_string(basis).map_err(|e| Error::Parse(e.to_string()))?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

impl ComponentProvider for DiskCache {
    fn component(&self, label: Label, at: Bidegree) -> Result<Arc<GradedComponentBasis>> {
        self.memo
            .get_or_compute(label, at, || self.load_or_compute(label, at))
    }
}
