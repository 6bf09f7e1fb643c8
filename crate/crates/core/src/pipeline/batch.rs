//! Batch assembly: collect accepted units and move them on as one action.
//!
//! The flow pauses until enough units have accumulated; with `min_units = 1`
//! batching degenerates to continuous flow.

use super::state::{advance, LifecycleEvent, UnitState};
use super::store::Store;
use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BatchStatus {
    Open,
    Processing,
    Done,
}

/// A batch record, stored as `batches/<id>.json`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Batch {
    pub batch_id: String,
    pub unit_ids: Vec<String>,
    pub created_at: String,
    pub status: BatchStatus,
}

#[derive(Debug, Error)]
pub enum BatchError {
    #[error("not enough accepted units: found {found}, need {need}")]
    NotEnoughUnits { found: usize, need: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn next_batch_id(store: &Store) -> std::io::Result<String> {
    let mut highest = 0u32;
    let dir = store.batches_dir();
    if dir.exists() {
        for entry in std::fs::read_dir(&dir)? {
            let entry = entry?;
            let name = entry.file_name();
            let name = name.to_string_lossy();
            if let Some(number) = name
                .strip_prefix("batch-")
                .and_then(|rest| rest.strip_suffix(".json"))
                .and_then(|digits| digits.parse::<u32>().ok())
            {
                highest = highest.max(number);
            }
        }
    }
    Ok(format!("batch-{:06}", highest + 1))
}

/// Collect every unit in state `Accepted` into a new batch.
///
/// Refuses to create a batch smaller than `min_units`; the flow stays
/// paused until enough units have accumulated. Collected units move to
/// `Batched`, so a unit never sits in two open batches.
pub fn create_batch(store: &Store, min_units: usize) -> Result<Batch, BatchError> {
    let mut accepted: Vec<(String, std::path::PathBuf)> = Vec::new();
    for (unit_id, dir) in store.list_units()? {
        if store.read_state(&dir).state == UnitState::Accepted {
            accepted.push((unit_id, dir));
        }
    }

    let need = min_units.max(1);
    if accepted.len() < need {
        return Err(BatchError::NotEnoughUnits { found: accepted.len(), need });
    }

    let batch = Batch {
        batch_id: next_batch_id(store)?,
        unit_ids: accepted.iter().map(|(id, _)| id.clone()).collect(),
        created_at: Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true),
        status: BatchStatus::Open,
    };

    std::fs::create_dir_all(store.batches_dir())?;
    let json = serde_json::to_string_pretty(&batch).expect("batch serializes");
    std::fs::write(store.batches_dir().join(format!("{}.json", batch.batch_id)), json + "\n")?;

    for (_, dir) in &accepted {
        let mut record = store.read_state(dir);
        record.state = advance(record.state, LifecycleEvent::BatchInclusion)
            .expect("accepted units can be batched");
        record.updated_at = Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true);
        store.write_state(dir, &record)?;
    }

    Ok(batch)
}

/// Read a batch record back.
pub fn load_batch(store: &Store, batch_id: &str) -> Option<Batch> {
    let text = std::fs::read_to_string(store.batches_dir().join(format!("{batch_id}.json"))).ok()?;
    serde_json::from_str(&text).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{save_unit_workbook, UnitWorkbook};
    use crate::model::{SchemaConfig, Shelfmark};
    use crate::pipeline::store::StateRecord;

    fn make_units(store: &Store, count: usize, state: UnitState) {
        let schema = SchemaConfig::default();
        for i in 0..count {
            let shelfmark: Shelfmark = format!("SA, Unit{i:02}").parse().unwrap();
            let workbook = UnitWorkbook::new(&shelfmark, &schema);
            let dir = store.unit_dir(&workbook.unit_id);
            save_unit_workbook(&workbook, &dir).unwrap();
            store.write_state(&dir, &StateRecord::new(state)).unwrap();
        }
    }

    #[test]
    fn collects_all_accepted_units() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path());
        make_units(&store, 5, UnitState::Accepted);
        let batch = create_batch(&store, 3).unwrap();
        assert_eq!(batch.unit_ids.len(), 5);
        assert_eq!(batch.batch_id, "batch-000001");
        assert_eq!(batch.status, BatchStatus::Open);
        for (_, unit_dir) in store.list_units().unwrap() {
            assert_eq!(store.read_state(&unit_dir).state, UnitState::Batched);
        }
        assert_eq!(load_batch(&store, "batch-000001"), Some(batch));
    }

    #[test]
    fn too_few_units_pauses_the_flow() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path());
        make_units(&store, 2, UnitState::Accepted);
        assert!(matches!(
            create_batch(&store, 3),
            Err(BatchError::NotEnoughUnits { found: 2, need: 3 })
        ));
        // nothing moved
        for (_, unit_dir) in store.list_units().unwrap() {
            assert_eq!(store.read_state(&unit_dir).state, UnitState::Accepted);
        }
    }

    #[test]
    fn no_accepted_units() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path());
        make_units(&store, 3, UnitState::InDescription);
        assert!(matches!(
            create_batch(&store, 1),
            Err(BatchError::NotEnoughUnits { found: 0, need: 1 })
        ));
    }

    #[test]
    fn batch_ids_increment() {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path());
        make_units(&store, 1, UnitState::Accepted);
        let first = create_batch(&store, 1).unwrap();
        assert_eq!(first.batch_id, "batch-000001");
        // re-accept the unit and batch again
        for (_, unit_dir) in store.list_units().unwrap() {
            store.write_state(&unit_dir, &StateRecord::new(UnitState::Accepted)).unwrap();
        }
        let second = create_batch(&store, 1).unwrap();
        assert_eq!(second.batch_id, "batch-000002");
    }
}
