//! The on-disk store layout and per-unit state records.
//!
//! A store root is any directory tree — local disk or a mounted share:
//!
//! ```text
//! <root>/
//!   schema.toml        field schema (built-in default when absent)
//!   units/<unit-id>/   one workbook directory per unit + state.json
//!   sec/               the four catalog CSV files + its report
//!   batches/<id>.json  batch records
//!   custody.csv        append-only custody ledger
//! ```

use super::state::UnitState;
use crate::model::{SchemaConfig, SchemaError};
use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const STATE_FILE: &str = "state.json";

/// `state.json` contents: the lifecycle state plus the sheet digest of the
/// last validation run, which is how the sync loop skips untouched units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateRecord {
    pub state: UnitState,
    pub updated_at: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validated_digest: Option<String>,
}

impl StateRecord {
    pub fn new(state: UnitState) -> StateRecord {
        StateRecord {
            state,
            updated_at: Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true),
            validated_digest: None,
        }
    }
}

/// Handle on a store root.
#[derive(Debug, Clone)]
pub struct Store {
    root: PathBuf,
}

impl Store {
    pub fn open(root: impl Into<PathBuf>) -> Store {
        Store { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn units_dir(&self) -> PathBuf {
        self.root.join("units")
    }

    pub fn unit_dir(&self, unit_id: &str) -> PathBuf {
        self.units_dir().join(unit_id)
    }

    pub fn sec_dir(&self) -> PathBuf {
        self.root.join("sec")
    }

    pub fn batches_dir(&self) -> PathBuf {
        self.root.join("batches")
    }

    pub fn custody_file(&self) -> PathBuf {
        self.root.join("custody.csv")
    }

    pub fn schema_file(&self) -> PathBuf {
        self.root.join("schema.toml")
    }

    /// The store's schema: `schema.toml` when present, the built-in default
    /// otherwise.
    pub fn load_schema(&self) -> Result<SchemaConfig, SchemaError> {
        let path = self.schema_file();
        if path.exists() {
            SchemaConfig::load(&path)
        } else {
            Ok(SchemaConfig::default())
        }
    }

    /// Make sure the layout directories and an empty catalog exist.
    pub fn ensure_layout(&self) -> std::io::Result<()> {
        std::fs::create_dir_all(self.units_dir())?;
        std::fs::create_dir_all(self.batches_dir())?;
        let sec = self.sec_dir();
        std::fs::create_dir_all(&sec)?;
        if !sec.join(crate::sec::PERSONS_FILE).exists() {
            crate::sec::save_catalog(&crate::sec::SecCatalog::new(), &sec)
                .map_err(|e| std::io::Error::other(e.to_string()))?;
        }
        Ok(())
    }

    /// Unit ids and directories, sorted by id. A unit directory is any
    /// child of `units/` holding a manifest.
    pub fn list_units(&self) -> std::io::Result<Vec<(String, PathBuf)>> {
        let mut units = Vec::new();
        let units_dir = self.units_dir();
        if !units_dir.exists() {
            return Ok(units);
        }
        for entry in std::fs::read_dir(&units_dir)? {
            let entry = entry?;
            let path = entry.path();
            if path.is_dir() && path.join(crate::ingest::MANIFEST_FILE).exists() {
                if let Some(name) = path.file_name().and_then(|n| n.to_str()) {
                    units.push((name.to_string(), path.clone()));
                }
            }
        }
        units.sort();
        Ok(units)
    }

    pub fn read_state(&self, unit_dir: &Path) -> StateRecord {
        std::fs::read_to_string(unit_dir.join(STATE_FILE))
            .ok()
            .and_then(|text| serde_json::from_str(&text).ok())
            .unwrap_or_else(|| StateRecord::new(UnitState::Created))
    }

    pub fn write_state(&self, unit_dir: &Path, record: &StateRecord) -> std::io::Result<()> {
        let json = serde_json::to_string_pretty(record).expect("state serializes");
        std::fs::write(unit_dir.join(STATE_FILE), json + "\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::save_unit_workbook;
    use crate::ingest::UnitWorkbook;
    use crate::model::Shelfmark;

    #[test]
    fn layout_and_listing() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path());
        store.ensure_layout().unwrap();
        assert!(store.sec_dir().join("persons.csv").exists());
        assert_eq!(store.list_units().unwrap().len(), 0);

        let schema = SchemaConfig::default();
        for name in ["SA, B", "SA, A"] {
            let shelfmark: Shelfmark = name.parse().unwrap();
            let workbook = UnitWorkbook::new(&shelfmark, &schema);
            save_unit_workbook(&workbook, &store.unit_dir(&workbook.unit_id)).unwrap();
        }
        let units = store.list_units().unwrap();
        let ids: Vec<&str> = units.iter().map(|(id, _)| id.as_str()).collect();
        assert_eq!(ids, vec!["sa-a", "sa-b"]);
    }

    #[test]
    fn state_defaults_to_created() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path());
        let record = store.read_state(dir.path());
        assert_eq!(record.state, UnitState::Created);

        let mut record = StateRecord::new(UnitState::Checked);
        record.validated_digest = Some("abc".into());
        store.write_state(dir.path(), &record).unwrap();
        assert_eq!(store.read_state(dir.path()), record);
    }

    #[test]
    fn missing_schema_file_gives_default() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path());
        assert_eq!(store.load_schema().unwrap(), SchemaConfig::default());
    }
}
