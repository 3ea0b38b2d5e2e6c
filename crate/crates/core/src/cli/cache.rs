//! On-disk cache of class catalogues and engine checkpoints. Entries are
//! keyed by their inputs and the crate version, so a stale entry is never
//! read; a missing or unreadable entry is simply recomputed.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use crate::closedform::{identify_labels, Label};
use crate::error::Result;
use crate::incidence::{enumerate_classes, parse_catalogue, write_catalogue, ClassFilter, ClassId, IsoClass};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug)]
pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: Some(dir.into()) }
    }

    /// `$ARCLAB_CACHE`, else `~/.cache/arclab`; disabled without a home.
    pub fn from_env() -> Self {
        if let Some(dir) = std::env::var_os("ARCLAB_CACHE") {
            return Cache::at(dir);
        }
        match std::env::var_os("HOME") {
            Some(home) => Cache::at(PathBuf::from(home).join(".cache").join("arclab")),
            None => Cache::disabled(),
        }
    }

    /// Versioned path for a named entry.
    pub fn path(&self, name: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{name}-v{VERSION}")))
    }

    pub fn classes(&self, n: usize, filter: ClassFilter) -> Result<Vec<IsoClass>> {
        let Some(path) = self.path(&format!("classes-n{n}-{filter}")) else {
            return enumerate_classes(n, filter);
        };
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok(entries) = parse_catalogue(&text) {
                if entries.iter().all(|e| e.class.n() == n && filter.accepts(&e.class)) {
                    return Ok(entries.into_iter().map(|e| e.class).collect());
                }
            }
        }
        let classes = enumerate_classes(n, filter)?;
        // A cache that cannot be written only costs time.
        let _ = store(&path, &write_catalogue(&classes));
        Ok(classes)
    }

    pub fn labels(&self, n: usize) -> Result<BTreeMap<Label, ClassId>> {
        identify_labels(n)
    }
}

fn store(path: &std::path::Path, text: &str) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)?;
    fs::rename(tmp, path)
}
