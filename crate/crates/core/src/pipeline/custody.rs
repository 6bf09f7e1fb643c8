//! The custody ledger for original manuscripts.
//!
//! Mirrors the paper register of signatures: an append-only log of
//! handovers. A party can only hand over a unit it currently holds, so the
//! replayed ledger always names one well-defined holder per unit.

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

/// One signed handover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CustodyEvent {
    pub unit_id: String,
    pub from_party: String,
    pub to_party: String,
    pub timestamp: String,
    pub note: String,
}

impl CustodyEvent {
    pub fn now(unit_id: &str, from_party: &str, to_party: &str, note: &str) -> CustodyEvent {
        CustodyEvent {
            unit_id: unit_id.to_string(),
            from_party: from_party.to_string(),
            to_party: to_party.to_string(),
            timestamp: Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true),
            note: note.to_string(),
        }
    }
}

#[derive(Debug, Error)]
pub enum CustodyError {
    #[error("unit `{unit_id}` is held by `{holder}`, not `{from_party}`")]
    HolderMismatch { unit_id: String, holder: String, from_party: String },
    #[error("custody ledger is unreadable: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

const HEADER: [&str; 5] = ["unit_id", "from_party", "to_party", "timestamp", "note"];

/// The replayed ledger.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CustodyLedger {
    pub events: Vec<CustodyEvent>,
}

impl CustodyLedger {
    /// Load the ledger file; a missing file is an empty ledger.
    pub fn load(path: &Path) -> Result<CustodyLedger, CustodyError> {
        if !path.exists() {
            return Ok(CustodyLedger::default());
        }
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_path(path)
            .map_err(|e| CustodyError::Corrupt(e.to_string()))?;
        let mut events = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| CustodyError::Corrupt(e.to_string()))?;
            let cell = |i: usize| record.get(i).unwrap_or("").to_string();
            events.push(CustodyEvent {
                unit_id: cell(0),
                from_party: cell(1),
                to_party: cell(2),
                timestamp: cell(3),
                note: cell(4),
            });
        }
        Ok(CustodyLedger { events })
    }

    /// The current holder of a unit: the receiving party of its last event.
    pub fn holder(&self, unit_id: &str) -> Option<&str> {
        self.events
            .iter()
            .rev()
            .find(|e| e.unit_id == unit_id)
            .map(|e| e.to_party.as_str())
    }

    /// Current holder per unit, replayed from the whole log.
    pub fn holders(&self) -> BTreeMap<String, String> {
        let mut holders = BTreeMap::new();
        for event in &self.events {
            holders.insert(event.unit_id.clone(), event.to_party.clone());
        }
        holders
    }

    /// Check an event against the current holder and append it in memory.
    pub fn record(&mut self, event: CustodyEvent) -> Result<(), CustodyError> {
        if let Some(holder) = self.holder(&event.unit_id) {
            if holder != event.from_party {
                return Err(CustodyError::HolderMismatch {
                    unit_id: event.unit_id,
                    holder: holder.to_string(),
                    from_party: event.from_party,
                });
            }
        }
        self.events.push(event);
        Ok(())
    }

    /// Events for one unit, in log order.
    pub fn unit_events(&self, unit_id: &str) -> Vec<&CustodyEvent> {
        self.events.iter().filter(|e| e.unit_id == unit_id).collect()
    }
}

/// Validate against the ledger on disk and append the event to the file.
pub fn record_custody(path: &Path, event: CustodyEvent) -> Result<(), CustodyError> {
    let mut ledger = CustodyLedger::load(path)?;
    ledger.record(event.clone())?;

    let is_new = !path.exists();
    let mut file = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    if is_new {
        writer.write_record(HEADER).map_err(|e| CustodyError::Corrupt(e.to_string()))?;
    }
    writer
        .write_record([&event.unit_id, &event.from_party, &event.to_party, &event.timestamp, &event.note])
        .map_err(|e| CustodyError::Corrupt(e.to_string()))?;
    let bytes = writer.into_inner().map_err(|e| CustodyError::Corrupt(e.to_string()))?;
    file.write_all(&bytes)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn event(unit: &str, from: &str, to: &str) -> CustodyEvent {
        CustodyEvent {
            unit_id: unit.into(),
            from_party: from.into(),
            to_party: to.into(),
            timestamp: "2024-05-01T10:00:00Z".into(),
            note: String::new(),
        }
    }

    #[test]
    fn first_handover_establishes_holding() {
        let mut ledger = CustodyLedger::default();
        ledger.record(event("sa-x", "vault", "scan-station")).unwrap();
        assert_eq!(ledger.holder("sa-x"), Some("scan-station"));
    }

    #[test]
    fn cannot_hand_over_what_you_do_not_hold() {
        let mut ledger = CustodyLedger::default();
        ledger.record(event("sa-x", "vault", "scan-station")).unwrap();
        let err = ledger.record(event("sa-x", "vault", "curator")).unwrap_err();
        assert!(matches!(err, CustodyError::HolderMismatch { .. }));
    }

    #[test]
    fn holder_follows_the_chain() {
        let mut ledger = CustodyLedger::default();
        ledger.record(event("sa-x", "vault", "scan-station")).unwrap();
        ledger.record(event("sa-x", "scan-station", "vault")).unwrap();
        assert_eq!(ledger.holder("sa-x"), Some("vault"));
        // replay of the whole log agrees
        assert_eq!(ledger.holders().get("sa-x").map(String::as_str), Some("vault"));
    }

    #[test]
    fn units_are_independent() {
        let mut ledger = CustodyLedger::default();
        ledger.record(event("sa-x", "vault", "scan-station")).unwrap();
        ledger.record(event("sa-y", "vault", "curator")).unwrap();
        assert_eq!(ledger.holder("sa-x"), Some("scan-station"));
        assert_eq!(ledger.holder("sa-y"), Some("curator"));
    }

    #[test]
    fn file_append_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("custody.csv");
        record_custody(&path, event("sa-x", "vault", "scan-station")).unwrap();
        record_custody(&path, event("sa-x", "scan-station", "vault")).unwrap();
        // a mismatching handover is refused and not appended
        assert!(record_custody(&path, event("sa-x", "scan-station", "vault")).is_err());

        let ledger = CustodyLedger::load(&path).unwrap();
        assert_eq!(ledger.events.len(), 2);
        assert_eq!(ledger.holder("sa-x"), Some("vault"));
    }
}
