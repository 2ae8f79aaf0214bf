//! On-disk persistence: uploaded CSV blobs with their manifests, and
//! session event logs.
//!
//! ```text
//! <root>/datasets/<id>.csv
//! <root>/datasets/<id>.json    manifest
//! <root>/sessions/<id>.json    event log
//! ```

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use counterfact::{ColumnType, Dataset, LoadOptions, SessionLog};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{ServiceError, ServiceResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnManifest {
    pub name: String,
    pub kind: ColumnType,
    pub distinct: usize,
    pub missing: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoredDataset {
    pub id: String,
    pub name: String,
    pub byte_size: usize,
    pub n_rows: usize,
    pub columns: Vec<ColumnManifest>,
    /// Load options the blob must be re-read with.
    pub options: LoadOptions,
}

impl StoredDataset {
    pub fn describe(id: String, byte_size: usize, ds: &Dataset, options: LoadOptions) -> Self {
        StoredDataset {
            id,
            name: ds.name().to_owned(),
            byte_size,
            n_rows: ds.n_rows(),
            columns: ds
                .columns()
                .iter()
                .map(|c| ColumnManifest {
                    name: c.name().to_owned(),
                    kind: c.kind(),
                    distinct: c.distinct_count(),
                    missing: c.missing_count(),
                })
                .collect(),
            options,
        }
    }
}

/// Content-derived dataset id: the same upload always gets the same id.
pub fn dataset_id(name: &str, options: &LoadOptions, bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(name.as_bytes());
    hasher.update([0u8]);
    hasher.update(serde_json::to_vec(options).expect("options serialize"));
    hasher.update([0u8]);
    hasher.update(bytes);
    hasher.finalize()[..12]
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && id.len() <= 64 && id.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'-')
}

#[derive(Debug, Clone)]
pub struct Store {
    root: PathBuf,
}

impl Store {
    pub fn open(root: impl Into<PathBuf>) -> std::io::Result<Self> {
        let root = root.into();
        fs::create_dir_all(root.join("datasets"))?;
        fs::create_dir_all(root.join("sessions"))?;
        Ok(Store { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn dataset_path(&self, id: &str, ext: &str) -> PathBuf {
        self.root.join("datasets").join(format!("{id}.{ext}"))
    }

    fn session_path(&self, id: &str) -> PathBuf {
        self.root.join("sessions").join(format!("{id}.json"))
    }

    /// Parses and stores an upload. Nothing is written if parsing fails.
    pub fn put_dataset(
        &self,
        name: &str,
        bytes: &[u8],
        options: LoadOptions,
    ) -> ServiceResult<(StoredDataset, Dataset)> {
        let ds = Dataset::load_csv_with(bytes, name, &options)?;
        let id = dataset_id(name, &options, bytes);
        let manifest = StoredDataset::describe(id.clone(), bytes.len(), &ds, options);
        write_atomic(&self.dataset_path(&id, "csv"), bytes)?;
        write_atomic(
            &self.dataset_path(&id, "json"),
            serde_json::to_string_pretty(&manifest)?.as_bytes(),
        )?;
        Ok((manifest, ds))
    }

    pub fn manifest(&self, id: &str) -> ServiceResult<StoredDataset> {
        let not_found = || ServiceError::NotFound {
            kind: "dataset",
            id: id.to_owned(),
        };
        if !valid_id(id) {
            return Err(not_found());
        }
        let text = fs::read_to_string(self.dataset_path(id, "json")).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => not_found(),
            _ => e.into(),
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn load_dataset(&self, id: &str) -> ServiceResult<(StoredDataset, Dataset)> {
        let manifest = self.manifest(id)?;
        let bytes = fs::read(self.dataset_path(id, "csv"))?;
        let ds = Dataset::load_csv_with(bytes.as_slice(), &manifest.name, &manifest.options)?;
        Ok((manifest, ds))
    }

    pub fn save_session(&self, id: &str, log: &SessionLog) -> ServiceResult<()> {
        write_atomic(
            &self.session_path(id),
            serde_json::to_string_pretty(log)?.as_bytes(),
        )?;
        Ok(())
    }

    pub fn session_log(&self, id: &str) -> ServiceResult<SessionLog> {
        let not_found = || ServiceError::NotFound {
            kind: "session",
            id: id.to_owned(),
        };
        if !valid_id(id) {
            return Err(not_found());
        }
        let text = fs::read_to_string(self.session_path(id)).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => not_found(),
            _ => e.into(),
        })?;
        Ok(serde_json::from_str(&text)?)
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension(format!("tmp-{}", uuid::Uuid::new_v4().simple()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_stable_and_content_derived() {
        let opts = LoadOptions::default();
        let a = dataset_id("d", &opts, b"a,b\n1,2\n");
        assert_eq!(a, dataset_id("d", &opts, b"a,b\n1,2\n"));
        assert_ne!(a, dataset_id("d", &opts, b"a,b\n1,3\n"));
        assert_ne!(a, dataset_id("e", &opts, b"a,b\n1,2\n"));
        assert_eq!(a.len(), 24);
    }

    #[test]
    fn round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        let (m, ds) = store.put_dataset("tiny", b"a,b\n1,x\n2,y\n", LoadOptions::default()).unwrap();
        assert_eq!(m.columns.len(), 2);
        let reopened = Store::open(dir.path()).unwrap();
        let (m2, ds2) = reopened.load_dataset(&m.id).unwrap();
        assert_eq!(m, m2);
        assert_eq!(ds, ds2);
    }

    #[test]
    fn hostile_ids_are_not_found() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        for id in ["../etc/passwd", "", "a/b", "a.b"] {
            assert!(matches!(store.manifest(id), Err(ServiceError::NotFound { .. })));
            assert!(matches!(store.session_log(id), Err(ServiceError::NotFound { .. })));
        }
    }

    #[test]
    fn failed_upload_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        assert!(store.put_dataset("bad", b"a,b\n1\n", LoadOptions::default()).is_err());
        assert_eq!(fs::read_dir(dir.path().join("datasets")).unwrap().count(), 0);
    }
}
