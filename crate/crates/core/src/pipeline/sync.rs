//! The idempotent sync sweep.
//!
//! One pass validates every workbook that changed since its last report,
//! writes reports next to the sheets, and advances unit states. Change
//! detection hashes the sheet bytes rather than trusting timestamps, so a
//! sweep right after a clean sweep touches nothing. Per-unit failures are
//! recorded and never abort the rest of the sweep.

use super::state::{advance, LifecycleEvent, UnitState};
use super::store::Store;
use crate::check::annotate;
use crate::ingest::{load_unit_workbook, migrate_workbook, save_unit_workbook, workbook_digest, UnitWorkbook};
use crate::model::SchemaConfig;
use crate::sec::SecCatalog;
use crate::semantic::{validate_unit, write_report, ValidationReport};
use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// What one sweep did.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyncSummary {
    pub processed: usize,
    pub skipped: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub failures: Vec<SyncFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyncFailure {
    pub unit_id: String,
    pub error: String,
}

/// Where a validation outcome moves a unit: an accepted report walks the
/// unit forward as far as `Validated`, a rejected one re-opens description.
/// States past `Validated` are left alone on clean re-validation.
pub fn advance_on_report(
    mut state: UnitState,
    report: &ValidationReport,
    workbook: &UnitWorkbook,
) -> UnitState {
    if report.accepted() {
        if state == UnitState::Created && workbook.metric.is_complete() {
            state = advance(state, LifecycleEvent::MetricComplete).unwrap_or(state);
        }
        if state == UnitState::MetricFilled && !workbook.documents.is_empty() {
            state = advance(state, LifecycleEvent::RowsAdded).unwrap_or(state);
        }
        if state == UnitState::InDescription {
            state = advance(state, LifecycleEvent::Program1Clean).unwrap_or(state);
        }
        if state == UnitState::Checked {
            state = advance(state, LifecycleEvent::Program2Accepted).unwrap_or(state);
        }
        state
    } else {
        advance(state, LifecycleEvent::ValidationFailed).unwrap_or(state)
    }
}

fn sync_unit(
    store: &Store,
    unit_dir: &Path,
    catalog: &SecCatalog,
    schema: &SchemaConfig,
) -> Result<ValidationReport, String> {
    let mut workbook =
        load_unit_workbook(unit_dir, schema).map_err(|e| e.to_string())?;
    if workbook.schema_version < schema.version {
        workbook = migrate_workbook(&workbook, schema).map_err(|e| e.to_string())?;
    }

    let before = workbook.clone();
    let report = validate_unit(&mut workbook, catalog, schema);
    if workbook != before {
        save_unit_workbook(&workbook, unit_dir).map_err(|e| e.to_string())?;
    }
    write_report(&report, unit_dir).map_err(|e| e.to_string())?;
    annotate(&workbook, &report.findings, unit_dir).map_err(|e| e.to_string())?;

    let mut record = store.read_state(unit_dir);
    record.state = advance_on_report(record.state, &report, &workbook);
    record.updated_at = Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true);
    record.validated_digest = Some(workbook_digest(unit_dir).map_err(|e| e.to_string())?);
    store.write_state(unit_dir, &record).map_err(|e| e.to_string())?;

    Ok(report)
}

/// Sweep the store once: validate changed workbooks, skip the rest.
pub fn sync_once(store: &Store, catalog: &SecCatalog, schema: &SchemaConfig) -> SyncSummary {
    let mut summary = SyncSummary::default();

    let units = match store.list_units() {
        Ok(units) => units,
        Err(e) => {
            summary.failures.push(SyncFailure { unit_id: "<store>".into(), error: e.to_string() });
            return summary;
        }
    };

    for (unit_id, unit_dir) in units {
        let digest = workbook_digest(&unit_dir).ok();
        let record = store.read_state(&unit_dir);
        if digest.is_some() && record.validated_digest == digest {
            summary.skipped += 1;
            continue;
        }

        match sync_unit(store, &unit_dir, catalog, schema) {
            Ok(report) => {
                summary.processed += 1;
                if report.accepted() {
                    summary.accepted += 1;
                } else {
                    summary.rejected += 1;
                }
            }
            Err(error) => {
                summary.failures.push(SyncFailure { unit_id, error });
            }
        }
    }

    summary
}
