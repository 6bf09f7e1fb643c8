//! Reading and writing unit workbooks.
//!
//! The canonical on-disk form of a unit is a directory of UTF-8 CSV sheets
//! plus a small JSON manifest — diff-able, vendor-neutral, and cheap to
//! stream at collection scale:
//!
//! ```text
//! <unit>/
//!   manifest.json    unit_id, shelfmark, schema_version, sheet inventory
//!   metric.csv       key,value rows (no header)
//!   documents.csv    header row of field ids, one row per document
//!   map.csv          card_no,role,scan_file (present once mapping starts)
//! ```
//!
//! Spreadsheet files are accepted through the [`xlsx`] import adapter but
//! never written back.

mod xlsx;

pub use xlsx::import_xlsx;

use crate::model::{DocumentRecord, MetricRecord, SchemaConfig, Shelfmark, METRIC_KEYS};
use crate::scanmap::ScanBinding;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::path::Path;
use thiserror::Error;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const METRIC_FILE: &str = "metric.csv";
pub const DOCUMENTS_FILE: &str = "documents.csv";
pub const MAP_FILE: &str = "map.csv";

/// `manifest.json` contents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkbookManifest {
    pub unit_id: String,
    pub shelfmark: String,
    pub schema_version: u32,
    pub sheets: Vec<String>,
}

/// One archival unit in memory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitWorkbook {
    pub unit_id: String,
    /// Shelfmark text as recorded in the manifest.
    pub shelfmark: String,
    pub schema_version: u32,
    pub metric: MetricRecord,
    /// Documents-sheet column order, exactly as on disk.
    pub columns: Vec<String>,
    /// Rows in on-disk order.
    pub documents: Vec<DocumentRecord>,
    /// MAP-sheet rows, once the sheet exists.
    pub map: Option<Vec<ScanBinding>>,
}

impl UnitWorkbook {
    /// A fresh workbook for a shelfmark, columns from the schema.
    pub fn new(shelfmark: &Shelfmark, schema: &SchemaConfig) -> UnitWorkbook {
        let metric = MetricRecord { shelfmark: shelfmark.to_string(), ..Default::default() };
        UnitWorkbook {
            unit_id: shelfmark.slug(),
            shelfmark: shelfmark.to_string(),
            schema_version: schema.version,
            metric,
            columns: schema.field_ids().map(str::to_string).collect(),
            documents: Vec::new(),
            map: None,
        }
    }

    /// Card numbers declared by the documents' `cards` fields, ascending.
    /// Unparseable values are skipped; the checker reports those.
    pub fn declared_cards(&self) -> BTreeSet<u32> {
        let mut cards = BTreeSet::new();
        for record in &self.documents {
            let raw = record.get("cards");
            if raw.is_empty() {
                continue;
            }
            if let Ok(ranges) = crate::scanmap::parse_card_range(raw) {
                cards.extend(crate::scanmap::card_set(&ranges));
            }
        }
        cards
    }

    fn sheet_inventory(&self) -> Vec<String> {
        let mut sheets = vec!["metric".to_string(), "documents".to_string()];
        if self.map.is_some() {
            sheets.push("map".to_string());
        }
        sheets
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("workbook manifest is missing")]
    MissingManifest,
    #[error("workbook manifest is not valid JSON: {0}")]
    ManifestInvalid(#[source] serde_json::Error),
    #[error("sheet missing: {0}")]
    MissingSheet(String),
    #[error("documents header repeats field `{0}`")]
    DuplicateHeader(String),
    #[error("documents header names unknown field `{0}`")]
    HeaderUnknownField(String),
    #[error("{0} is not valid UTF-8")]
    Encoding(String),
    #[error("map.csv header must be card_no,role,scan_file")]
    MapHeaderInvalid,
    #[error("map.csv row {row}: `{value}` is not a positive card number")]
    MapCardInvalid { row: u32, value: String },
    #[error("map.csv row {row}: duplicate binding for card {card_no} role `{role}`")]
    DuplicateBinding { row: u32, card_no: u32, role: String },
    #[error("workbook schema version {workbook} is newer than schema version {schema}")]
    SchemaDowngrade { workbook: u32, schema: u32 },
    #[error("cannot read spreadsheet: {0}")]
    UnreadableFile(String),
    #[error("{file}: {source}")]
    Csv {
        file: String,
        #[source]
        source: csv::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn csv_error(file: &str, source: csv::Error) -> IngestError {
    if matches!(source.kind(), csv::ErrorKind::Utf8 { .. }) {
        IngestError::Encoding(file.to_string())
    } else {
        IngestError::Csv { file: file.to_string(), source }
    }
}

fn read_csv_rows(path: &Path, file: &str, has_headers: bool) -> Result<(Vec<String>, Vec<Vec<String>>), IngestError> {
    if !path.exists() {
        return Err(IngestError::MissingSheet(file.to_string()));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_headers)
        .flexible(true)
        .from_path(path)
        .map_err(|e| csv_error(file, e))?;
    let header: Vec<String> = if has_headers {
        reader.headers().map_err(|e| csv_error(file, e))?.iter().map(str::to_string).collect()
    } else {
        Vec::new()
    };
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(file, e))?;
        rows.push(record.iter().map(str::to_string).collect());
    }
    Ok((header, rows))
}

fn cell(row: &[String], index: usize) -> &str {
    row.get(index).map(String::as_str).unwrap_or("")
}

/// Validate a documents header against the schema: every id known, none
/// repeated.
pub fn validate_header(header: &[String], schema: &SchemaConfig) -> Result<(), IngestError> {
    let mut seen = BTreeSet::new();
    for id in header {
        if !seen.insert(id.as_str()) {
            return Err(IngestError::DuplicateHeader(id.clone()));
        }
        if !schema.has_field(id) {
            return Err(IngestError::HeaderUnknownField(id.clone()));
        }
    }
    Ok(())
}

pub(crate) fn documents_from_rows(header: &[String], rows: Vec<Vec<String>>) -> Vec<DocumentRecord> {
    rows.into_iter()
        .map(|row| {
            let mut record = DocumentRecord::new();
            for (i, id) in header.iter().enumerate() {
                record.set(id, cell(&row, i));
            }
            record
        })
        .collect()
}

pub(crate) fn map_from_rows(header: &[String], rows: Vec<Vec<String>>) -> Result<Vec<ScanBinding>, IngestError> {
    if header != ["card_no", "role", "scan_file"] {
        return Err(IngestError::MapHeaderInvalid);
    }
    let mut bindings: Vec<ScanBinding> = Vec::with_capacity(rows.len());
    let mut seen: BTreeSet<(u32, String)> = BTreeSet::new();
    for (i, row) in rows.iter().enumerate() {
        let row_no = (i + 2) as u32;
        let raw_card = cell(row, 0);
        let card_no: u32 = raw_card
            .parse()
            .ok()
            .filter(|n| *n > 0)
            .ok_or_else(|| IngestError::MapCardInvalid { row: row_no, value: raw_card.to_string() })?;
        let role = cell(row, 1).to_string();
        if !seen.insert((card_no, role.clone())) {
            return Err(IngestError::DuplicateBinding { row: row_no, card_no, role });
        }
        bindings.push(ScanBinding { card_no, role, scan_file: cell(row, 2).to_string() });
    }
    Ok(bindings)
}

/// Load a unit workbook from its directory, raw cell texts preserved.
pub fn load_unit_workbook(dir: &Path, schema: &SchemaConfig) -> Result<UnitWorkbook, IngestError> {
    let manifest_path = dir.join(MANIFEST_FILE);
    if !manifest_path.exists() {
        return Err(IngestError::MissingManifest);
    }
    let manifest_bytes = std::fs::read(&manifest_path)?;
    let manifest_text = String::from_utf8(manifest_bytes)
        .map_err(|_| IngestError::Encoding(MANIFEST_FILE.to_string()))?;
    let manifest: WorkbookManifest =
        serde_json::from_str(&manifest_text).map_err(IngestError::ManifestInvalid)?;

    // metric: headerless key,value rows
    let (_, metric_rows) = read_csv_rows(&dir.join(METRIC_FILE), METRIC_FILE, false)?;
    let mut metric = MetricRecord::default();
    for row in &metric_rows {
        metric.set(cell(row, 0), cell(row, 1));
    }

    let (header, doc_rows) = read_csv_rows(&dir.join(DOCUMENTS_FILE), DOCUMENTS_FILE, true)?;
    validate_header(&header, schema)?;
    let documents = documents_from_rows(&header, doc_rows);

    let map_path = dir.join(MAP_FILE);
    let manifest_lists_map = manifest.sheets.iter().any(|s| s == "map");
    let map = if map_path.exists() {
        let (map_header, map_rows) = read_csv_rows(&map_path, MAP_FILE, true)?;
        Some(map_from_rows(&map_header, map_rows)?)
    } else if manifest_lists_map {
        return Err(IngestError::MissingSheet(MAP_FILE.to_string()));
    } else {
        None
    };

    Ok(UnitWorkbook {
        unit_id: manifest.unit_id,
        shelfmark: manifest.shelfmark,
        schema_version: manifest.schema_version,
        metric,
        columns: header,
        documents,
        map,
    })
}

fn write_csv(path: &Path, file: &str, rows: Vec<Vec<String>>) -> Result<(), IngestError> {
    let mut writer = csv::WriterBuilder::new()
        .flexible(true)
        .from_path(path)
        .map_err(|e| csv_error(file, e))?;
    for row in rows {
        writer.write_record(&row).map_err(|e| csv_error(file, e))?;
    }
    writer.flush()?;
    Ok(())
}

/// Write a workbook to its directory.
///
/// Output is byte-deterministic given the workbook value, and
/// `load(save(w))` returns `w` field for field. Columns pick up any stray
/// record keys (sorted) so no cell is ever dropped.
pub fn save_unit_workbook(workbook: &UnitWorkbook, dir: &Path) -> Result<(), IngestError> {
    std::fs::create_dir_all(dir)?;

    let mut columns = workbook.columns.clone();
    let mut extra: BTreeSet<&str> = BTreeSet::new();
    for record in &workbook.documents {
        for key in record.values.keys() {
            if !columns.iter().any(|c| c == key) {
                extra.insert(key);
            }
        }
    }
    columns.extend(extra.into_iter().map(str::to_string));

    let manifest = WorkbookManifest {
        unit_id: workbook.unit_id.clone(),
        shelfmark: workbook.shelfmark.clone(),
        schema_version: workbook.schema_version,
        sheets: workbook.sheet_inventory(),
    };
    let manifest_json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    std::fs::write(dir.join(MANIFEST_FILE), manifest_json + "\n")?;

    let mut metric_rows: Vec<Vec<String>> = METRIC_KEYS
        .iter()
        .map(|key| vec![key.to_string(), workbook.metric.get(key).unwrap_or("").to_string()])
        .collect();
    for (key, value) in &workbook.metric.extra {
        metric_rows.push(vec![key.clone(), value.clone()]);
    }
    write_csv(&dir.join(METRIC_FILE), METRIC_FILE, metric_rows)?;

    let mut doc_rows: Vec<Vec<String>> = vec![columns.clone()];
    for record in &workbook.documents {
        doc_rows.push(columns.iter().map(|c| record.get(c).to_string()).collect());
    }
    write_csv(&dir.join(DOCUMENTS_FILE), DOCUMENTS_FILE, doc_rows)?;

    let map_path = dir.join(MAP_FILE);
    match &workbook.map {
        Some(bindings) => {
            let mut rows: Vec<Vec<String>> =
                vec![vec!["card_no".into(), "role".into(), "scan_file".into()]];
            for b in bindings {
                rows.push(vec![b.card_no.to_string(), b.role.clone(), b.scan_file.clone()]);
            }
            write_csv(&map_path, MAP_FILE, rows)?;
        }
        None => {
            if map_path.exists() {
                std::fs::remove_file(&map_path)?;
            }
        }
    }
    Ok(())
}

/// Bring a workbook up to `schema`: missing fields become empty columns,
/// existing cells are untouched. Idempotent.
pub fn migrate_workbook(
    workbook: &UnitWorkbook,
    schema: &SchemaConfig,
) -> Result<UnitWorkbook, IngestError> {
    if workbook.schema_version > schema.version {
        return Err(IngestError::SchemaDowngrade {
            workbook: workbook.schema_version,
            schema: schema.version,
        });
    }
    let mut migrated = workbook.clone();
    for id in schema.field_ids() {
        if !migrated.columns.iter().any(|c| c == id) {
            migrated.columns.push(id.to_string());
        }
    }
    migrated.schema_version = schema.version;
    Ok(migrated)
}

/// A stable fingerprint of the on-disk sheets, used by the sync loop to
/// decide whether a workbook changed since its last report.
pub fn workbook_digest(dir: &Path) -> Result<String, IngestError> {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    for file in [MANIFEST_FILE, METRIC_FILE, DOCUMENTS_FILE, MAP_FILE] {
        let path = dir.join(file);
        hasher.update(file.as_bytes());
        hasher.update([0u8]);
        if let Ok(bytes) = std::fs::read(&path) {
            hasher.update(&bytes);
        }
        hasher.update([0u8]);
    }
    let digest = hasher.finalize();
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SchemaConfig;

    fn schema() -> SchemaConfig {
        SchemaConfig::default()
    }

    fn sample_workbook() -> UnitWorkbook {
        let shelfmark: Shelfmark = "SA, Keppler, Johannes".parse().unwrap();
        let mut workbook = UnitWorkbook::new(&shelfmark, &schema());
        workbook.metric.title = "Letters of J. Keppler".into();
        workbook.metric.card_count = "3".into();
        workbook.documents.push(
            DocumentRecord::new()
                .with("doc_no", "2.1")
                .with("title", "Letter to T. Harriot")
                .with("date", "1608-09-02")
                .with("cards", "1-2"),
        );
        workbook.documents.push(
            DocumentRecord::new()
                .with("doc_no", "2.2")
                .with("title", "Letter, with a \"quoted\" title, and commas")
                .with("cards", "3"),
        );
        workbook
    }

    #[test]
    fn round_trip_identity() {
        let dir = tempfile::tempdir().unwrap();
        let workbook = sample_workbook();
        save_unit_workbook(&workbook, dir.path()).unwrap();
        let loaded = load_unit_workbook(dir.path(), &schema()).unwrap();
        assert_eq!(loaded, workbook);
    }

    #[test]
    fn hand_built_fixture_loads() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join(MANIFEST_FILE),
            "{\"unit_id\":\"sa-keppler-johannes\",\"shelfmark\":\"SA, Keppler, Johannes\",\"schema_version\":1,\"sheets\":[\"metric\",\"documents\"]}\n",
        )
        .unwrap();
        std::fs::write(dir.path().join(METRIC_FILE), "title,Letters of J. Keppler\n").unwrap();
        std::fs::write(dir.path().join(DOCUMENTS_FILE), "doc_no,title,date\n2.1,A letter,1608\n")
            .unwrap();

        let workbook = load_unit_workbook(dir.path(), &schema()).unwrap();
        assert_eq!(workbook.unit_id, "sa-keppler-johannes");
        assert_eq!(workbook.metric.title, "Letters of J. Keppler");
        assert_eq!(workbook.documents.len(), 1);
        assert_eq!(workbook.documents[0].get("doc_no"), "2.1");
        assert_eq!(workbook.columns, vec!["doc_no", "title", "date"]);
        assert!(workbook.map.is_none());
    }

    #[test]
    fn quoted_cells_survive() {
        let dir = tempfile::tempdir().unwrap();
        let mut workbook = sample_workbook();
        workbook.documents[0].set("title", "line\nbreak, \"quotes\", commas");
        save_unit_workbook(&workbook, dir.path()).unwrap();
        let loaded = load_unit_workbook(dir.path(), &schema()).unwrap();
        assert_eq!(loaded.documents[0].get("title"), "line\nbreak, \"quotes\", commas");
    }

    #[test]
    fn save_is_byte_deterministic() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let workbook = sample_workbook();
        save_unit_workbook(&workbook, a.path()).unwrap();
        save_unit_workbook(&workbook, b.path()).unwrap();
        assert_eq!(workbook_digest(a.path()).unwrap(), workbook_digest(b.path()).unwrap());
    }

    #[test]
    fn empty_documents_writes_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let shelfmark: Shelfmark = "SA, X".parse().unwrap();
        let workbook = UnitWorkbook::new(&shelfmark, &schema());
        save_unit_workbook(&workbook, dir.path()).unwrap();
        let text = std::fs::read_to_string(dir.path().join(DOCUMENTS_FILE)).unwrap();
        assert_eq!(text.lines().count(), 1);
        let loaded = load_unit_workbook(dir.path(), &schema()).unwrap();
        assert!(loaded.documents.is_empty());
    }

    #[test]
    fn missing_documents_sheet() {
        let dir = tempfile::tempdir().unwrap();
        save_unit_workbook(&sample_workbook(), dir.path()).unwrap();
        std::fs::remove_file(dir.path().join(DOCUMENTS_FILE)).unwrap();
        assert!(matches!(
            load_unit_workbook(dir.path(), &schema()),
            Err(IngestError::MissingSheet(f)) if f == DOCUMENTS_FILE
        ));
    }

    #[test]
    fn missing_manifest() {
        let dir = tempfile::tempdir().unwrap();
        save_unit_workbook(&sample_workbook(), dir.path()).unwrap();
        std::fs::remove_file(dir.path().join(MANIFEST_FILE)).unwrap();
        assert!(matches!(load_unit_workbook(dir.path(), &schema()), Err(IngestError::MissingManifest)));
    }

    #[test]
    fn duplicate_header_rejected() {
        let dir = tempfile::tempdir().unwrap();
        save_unit_workbook(&sample_workbook(), dir.path()).unwrap();
        std::fs::write(dir.path().join(DOCUMENTS_FILE), "doc_no,doc_no\n1.1,1.2\n").unwrap();
        assert!(matches!(
            load_unit_workbook(dir.path(), &schema()),
            Err(IngestError::DuplicateHeader(f)) if f == "doc_no"
        ));
    }

    #[test]
    fn unknown_header_rejected() {
        let dir = tempfile::tempdir().unwrap();
        save_unit_workbook(&sample_workbook(), dir.path()).unwrap();
        std::fs::write(dir.path().join(DOCUMENTS_FILE), "doc_no,no_such_field\n").unwrap();
        assert!(matches!(
            load_unit_workbook(dir.path(), &schema()),
            Err(IngestError::HeaderUnknownField(f)) if f == "no_such_field"
        ));
    }

    #[test]
    fn non_utf8_sheet_is_an_encoding_error() {
        let dir = tempfile::tempdir().unwrap();
        save_unit_workbook(&sample_workbook(), dir.path()).unwrap();
        std::fs::write(dir.path().join(DOCUMENTS_FILE), [b'd', b'o', b'c', 0xff, 0xfe, b'\n']).unwrap();
        assert!(matches!(load_unit_workbook(dir.path(), &schema()), Err(IngestError::Encoding(_))));
    }

    #[test]
    fn duplicate_map_binding_rejected_with_row() {
        let dir = tempfile::tempdir().unwrap();
        let mut workbook = sample_workbook();
        workbook.map = Some(vec![ScanBinding::new(1, "recto", "a.tif")]);
        save_unit_workbook(&workbook, dir.path()).unwrap();
        std::fs::write(
            dir.path().join(MAP_FILE),
            "card_no,role,scan_file\n1,recto,a.tif\n1,recto,b.tif\n",
        )
        .unwrap();
        assert!(matches!(
            load_unit_workbook(dir.path(), &schema()),
            Err(IngestError::DuplicateBinding { row: 3, card_no: 1, .. })
        ));
    }

    #[test]
    fn migrate_adds_columns_and_is_idempotent() {
        let workbook = sample_workbook();
        let mut extended = schema();
        extended.version = 2;
        extended.fields.push(crate::model::FieldSpec {
            id: "language".into(),
            label: "Language".into(),
            mandatory: false,
            applicability: crate::model::Category::ALL.into_iter().collect(),
            value_kind: crate::model::ValueKind::Text,
        });

        let migrated = migrate_workbook(&workbook, &extended).unwrap();
        assert_eq!(migrated.schema_version, 2);
        assert!(migrated.columns.iter().any(|c| c == "language"));
        assert_eq!(migrated.documents, workbook.documents);

        let again = migrate_workbook(&migrated, &extended).unwrap();
        assert_eq!(again, migrated);
    }

    #[test]
    fn migrate_rejects_downgrade() {
        let mut workbook = sample_workbook();
        workbook.schema_version = 3;
        let mut old = schema();
        old.version = 2;
        assert!(matches!(
            migrate_workbook(&workbook, &old),
            Err(IngestError::SchemaDowngrade { workbook: 3, schema: 2 })
        ));
    }

    #[test]
    fn metric_values_preserved_byte_exact() {
        let dir = tempfile::tempdir().unwrap();
        let mut workbook = sample_workbook();
        workbook.metric.remarks = "  leading and trailing spaces  ".into();
        workbook.metric.extra.insert("provenance".into(), "Berlin".into());
        save_unit_workbook(&workbook, dir.path()).unwrap();
        let loaded = load_unit_workbook(dir.path(), &schema()).unwrap();
        assert_eq!(loaded.metric, workbook.metric);
    }
}
