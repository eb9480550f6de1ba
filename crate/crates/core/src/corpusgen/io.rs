use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::ParseError;
use crate::proofscript::{parse_file, ScriptFile};

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("manifest: {0}")]
    Manifest(#[from] serde_json::Error),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    pub theorems: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: Option<u64>,
    pub files: Vec<ManifestEntry>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CorpusError + '_ {
    move |source| CorpusError::Io {
        path: path.to_owned(),
        source,
    }
}

/// Write one `.vs` file per corpus file plus `manifest.json`.
pub fn write_corpus(dir: &Path, files: &[ScriptFile], seed: Option<u64>) -> Result<Manifest, CorpusError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut manifest = Manifest {
        seed,
        files: Vec::with_capacity(files.len()),
    };
    for f in files {
        let name = format!("{}.vs", f.name);
        let path = dir.join(&name);
        fs::write(&path, f.to_string()).map_err(io_err(&path))?;
        manifest.files.push(ManifestEntry {
            file: name,
            theorems: f.theorems.len(),
        });
    }
    let path = dir.join(MANIFEST);
    fs::write(&path, serde_json::to_string_pretty(&manifest)?).map_err(io_err(&path))?;
    Ok(manifest)
}

/// Read the files listed in `dir/manifest.json`.
pub fn read_corpus(dir: &Path) -> Result<Vec<ScriptFile>, CorpusError> {
    let path = dir.join(MANIFEST);
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    let manifest: Manifest = serde_json::from_str(&text)?;
    manifest
        .files
        .iter()
        .map(|e| {
            let path = dir.join(&e.file);
            let text = fs::read_to_string(&path).map_err(io_err(&path))?;
            let stem = e.file.strip_suffix(".vs").unwrap_or(&e.file);
            parse_file(stem, &text).map_err(|source| CorpusError::Parse { path, source })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpusgen::generate;

    #[test]
    fn round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let corpus = generate(1, 2, 8);
        let m = write_corpus(dir.path(), &corpus, Some(1)).unwrap();
        assert_eq!(m.files[0].theorems, 8);
        assert_eq!(read_corpus(dir.path()).unwrap(), corpus);
    }
}
