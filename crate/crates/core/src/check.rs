//! Incremental (per-row) validation: syntax, completeness, field blocking,
//! and metric-first ordering.
//!
//! Findings are data, never exceptions: a check returns every problem it can
//! see at once. Each finding is addressed to a sheet, row, and column so it
//! can be placed next to the offending cell.
//!
//! Diagnostic code registry:
//!
//! | code                | severity | meaning |
//! |---------------------|----------|---------|
//! | `METRIC_FIRST`      | error    | documents entered before the metric is complete |
//! | `MANDATORY_MISSING` | error    | mandatory applicable field left empty |
//! | `BLOCKED_FIELD`     | error    | value present in a field blocked for the category |
//! | `DOCNO_INVALID`     | error    | document number fails the `x.y` form |
//! | `DATE_INVALID`      | error    | date fails the grammar or the calendar |
//! | `CARDS_INVALID`     | error    | card range fails the `N`/`N-N` list form |
//! | `URL_INVALID`       | error    | value is not an absolute http(s) URL |
//! | `INTEGER_INVALID`   | error    | value is not an integer |
//! | `SECREF_INVALID`    | error    | value is not a `P-`/`L-` SEC id |
//! | `DUPLICATE_DOCNO`   | error    | document number already used in the unit |
//! | `SHELFMARK_INVALID` | error    | metric shelfmark fails the `SA, <Name>` form |
//! | `CARD_COUNT_INVALID`| error    | metric card count is not a non-negative integer |
//!
//! Batch-stage codes (`SECREF_UNKNOWN`, `SEQ_GAP`, ...) are documented in
//! [`crate::semantic`]; coverage codes in [`crate::scanmap`].

use crate::ingest::UnitWorkbook;
use crate::model::{
    DocumentRecord, FieldSpec, MetricRecord, ParsedRow, SchemaConfig, TypedValue, ValueKind,
    METRIC_KEYS,
};
use crate::scanmap::parse_card_range;
use crate::sec::SecId;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

/// Finding severity; `Error` blocks acceptance, the rest do not.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        };
        f.write_str(s)
    }
}

/// Which sheet a finding points into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sheet {
    Metric,
    Documents,
    Map,
    Persons,
    Places,
}

impl fmt::Display for Sheet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Sheet::Metric => "metric",
            Sheet::Documents => "documents",
            Sheet::Map => "map",
            Sheet::Persons => "persons",
            Sheet::Places => "places",
        };
        f.write_str(s)
    }
}

/// A single cell-addressed finding.
///
/// Rows are spreadsheet rows: sheets with a header row (documents, map, SEC
/// tables) start their data at row 2; the headerless metric sheet numbers
/// its keys from row 1. Column is a field id, or `"row"` for findings about
/// a whole row or sheet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: String,
    pub sheet: Sheet,
    pub row: u32,
    pub column: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(
        severity: Severity,
        code: &str,
        sheet: Sheet,
        row: u32,
        column: &str,
        message: impl Into<String>,
    ) -> Diagnostic {
        Diagnostic { severity, code: code.to_string(), sheet, row, column: column.to_string(), message: message.into() }
    }

    pub fn error(code: &str, sheet: Sheet, row: u32, column: &str, message: impl Into<String>) -> Diagnostic {
        Diagnostic::new(Severity::Error, code, sheet, row, column, message)
    }

    /// Cell address in `sheet!R<row>C<column>` form.
    pub fn address(&self) -> String {
        format!("{}!R{}C{}", self.sheet, self.row, self.column)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}: {}", self.severity, self.code, self.address(), self.message)
    }
}

/// Number of findings per severity.
pub fn count_severity(findings: &[Diagnostic], severity: Severity) -> usize {
    findings.iter().filter(|d| d.severity == severity).count()
}

/// Parse one raw cell by its declared kind.
///
/// Returns the typed value, or the diagnostic code and message describing
/// the failure.
pub fn parse_value(kind: ValueKind, raw: &str) -> Result<TypedValue, (&'static str, String)> {
    match kind {
        ValueKind::Text => Ok(TypedValue::Text(raw.to_string())),
        ValueKind::DocNumber => raw
            .parse()
            .map(TypedValue::DocNumber)
            .map_err(|e| ("DOCNO_INVALID", format!("`{raw}`: {e}"))),
        ValueKind::DateExpression => raw
            .parse()
            .map(TypedValue::Date)
            .map_err(|e| ("DATE_INVALID", format!("`{raw}`: {e}"))),
        ValueKind::SecPersonRef | ValueKind::SecPlaceRef => raw
            .parse::<SecId>()
            .map(TypedValue::SecRef)
            .map_err(|e| ("SECREF_INVALID", format!("`{raw}`: {e}"))),
        ValueKind::CardRange => parse_card_range(raw)
            .map(TypedValue::Cards)
            .map_err(|e| ("CARDS_INVALID", format!("`{raw}`: {e}"))),
        ValueKind::Url => {
            let parsed = url::Url::parse(raw).ok().filter(|u| u.has_host());
            match parsed {
                Some(_) => Ok(TypedValue::Url(raw.to_string())),
                None => Err(("URL_INVALID", format!("`{raw}` is not an absolute URL"))),
            }
        }
        ValueKind::Integer => raw
            .parse::<i64>()
            .map(TypedValue::Integer)
            .map_err(|_| ("INTEGER_INVALID", format!("`{raw}` is not an integer"))),
    }
}

fn field_applicability(field: &FieldSpec, record: &DocumentRecord) -> Option<bool> {
    // None when the category cannot be read off the doc_no yet
    record.category().map(|c| field.applies_to(c))
}

/// Run the per-row checks on one documents-sheet row.
///
/// `row` is the spreadsheet row the record sits on. Findings come out in
/// schema field order, so identical input yields an identical list.
pub fn check_row(record: &DocumentRecord, schema: &SchemaConfig, row: u32) -> Vec<Diagnostic> {
    check_row_typed(record, schema, row).0
}

/// [`check_row`] plus the typed view of every cleanly parsed cell.
pub fn check_row_typed(
    record: &DocumentRecord,
    schema: &SchemaConfig,
    row: u32,
) -> (Vec<Diagnostic>, ParsedRow) {
    let mut findings = Vec::new();
    let mut parsed: ParsedRow = BTreeMap::new();

    for field in &schema.fields {
        let raw = record.get(&field.id);
        let applicable = field_applicability(field, record);
        let universally_applicable = field.applicability.len() == 9;

        if applicable == Some(false) {
            if !raw.is_empty() {
                findings.push(Diagnostic::error(
                    "BLOCKED_FIELD",
                    Sheet::Documents,
                    row,
                    &field.id,
                    format!(
                        "field `{}` is not used for category {} ({})",
                        field.id,
                        record.category().expect("category known").code(),
                        record.category().expect("category known").label()
                    ),
                ));
            }
            continue;
        }

        if raw.is_empty() {
            // mandatory check needs a known category unless the field
            // applies everywhere anyway
            if field.mandatory && (applicable == Some(true) || universally_applicable) {
                findings.push(Diagnostic::error(
                    "MANDATORY_MISSING",
                    Sheet::Documents,
                    row,
                    &field.id,
                    format!("mandatory field `{}` is empty", field.id),
                ));
            }
            continue;
        }

        match parse_value(field.value_kind, raw) {
            Ok(value) => {
                parsed.insert(field.id.clone(), value);
            }
            Err((code, message)) => {
                findings.push(Diagnostic::error(code, Sheet::Documents, row, &field.id, message));
            }
        }
    }

    (findings, parsed)
}

fn metric_row(key: &str) -> u32 {
    METRIC_KEYS.iter().position(|k| *k == key).map(|i| (i + 1) as u32).unwrap_or(1)
}

fn check_metric(metric: &MetricRecord) -> Vec<Diagnostic> {
    let mut findings = Vec::new();
    if !metric.shelfmark.trim().is_empty() && metric.parsed_shelfmark().is_none() {
        findings.push(Diagnostic::error(
            "SHELFMARK_INVALID",
            Sheet::Metric,
            metric_row("shelfmark"),
            "shelfmark",
            format!("`{}` is not an `SA, <Name>` shelfmark", metric.shelfmark),
        ));
    }
    if !metric.card_count.trim().is_empty() && metric.card_count.parse::<u64>().is_err() {
        findings.push(Diagnostic::error(
            "CARD_COUNT_INVALID",
            Sheet::Metric,
            metric_row("card_count"),
            "card_count",
            format!("`{}` is not a non-negative integer", metric.card_count),
        ));
    }
    findings
}

/// Run the incremental checks over a whole workbook.
///
/// If the metric is incomplete while document rows exist, the single
/// `METRIC_FIRST` finding is returned and nothing else is checked: the
/// metric is filled out first, then the main sheet.
pub fn check_unit(workbook: &UnitWorkbook, schema: &SchemaConfig) -> Vec<Diagnostic> {
    if !workbook.metric.is_complete() && !workbook.documents.is_empty() {
        return vec![Diagnostic::error(
            "METRIC_FIRST",
            Sheet::Metric,
            1,
            "row",
            "fill out the metric sheet before describing documents",
        )];
    }

    let mut findings = check_metric(&workbook.metric);

    for (index, record) in workbook.documents.iter().enumerate() {
        findings.extend(check_row(record, schema, (index + 2) as u32));
    }

    // duplicate document numbers, each occurrence after the first
    let mut first_seen: BTreeMap<String, u32> = BTreeMap::new();
    for (index, record) in workbook.documents.iter().enumerate() {
        let row = (index + 2) as u32;
        let Some(doc_no) = record.doc_no() else { continue };
        match first_seen.get(&doc_no.to_string()) {
            Some(first_row) => findings.push(Diagnostic::error(
                "DUPLICATE_DOCNO",
                Sheet::Documents,
                row,
                "doc_no",
                format!("document number {doc_no} already used in row {first_row}"),
            )),
            None => {
                first_seen.insert(doc_no.to_string(), row);
            }
        }
    }

    findings
}

/// Sort findings for presentation: errors, then warnings, then infos,
/// stable within each group.
pub fn sort_for_report(findings: &mut [Diagnostic]) {
    findings.sort_by_key(|d| d.severity);
}

/// Write `diagnostics.json` and `diagnostics.txt` next to the workbook.
///
/// The text file carries one line per finding plus, per row, the
/// concatenated messages that belong in the sheet's annotation column.
pub fn annotate(
    workbook: &UnitWorkbook,
    diagnostics: &[Diagnostic],
    dir: &Path,
) -> std::io::Result<()> {
    let mut sorted = diagnostics.to_vec();
    sort_for_report(&mut sorted);

    let json = serde_json::to_string_pretty(&sorted).expect("diagnostics serialize");
    std::fs::write(dir.join("diagnostics.json"), json + "\n")?;
    std::fs::write(dir.join("diagnostics.txt"), render_annotations(workbook, &sorted))?;
    Ok(())
}

fn render_annotations(workbook: &UnitWorkbook, sorted: &[Diagnostic]) -> String {
    let mut out = String::new();
    out.push_str(&format!("unit: {}\n", workbook.unit_id));
    if sorted.is_empty() {
        out.push_str("OK (0 findings)\n");
        return out;
    }
    for d in sorted {
        out.push_str(&d.to_string());
        out.push('\n');
    }

    // the per-row message column
    let mut by_row: BTreeMap<(Sheet, u32), Vec<&str>> = BTreeMap::new();
    for d in sorted {
        by_row.entry((d.sheet, d.row)).or_default().push(&d.message);
    }
    out.push_str("\nrow notes:\n");
    for ((sheet, row), messages) in by_row {
        out.push_str(&format!("{sheet}!R{row}: {}\n", messages.join("; ")));
    }
    out
}
