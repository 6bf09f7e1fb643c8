//! Batch validation: full-workbook semantics against the catalog, document
//! sequencing, catalog linting, MAP-sheet creation, and reports.
//!
//! The batch stage strictly extends the incremental stage: every finding
//! the per-row checks would raise appears in the batch report, followed by
//! the checks that need the whole workbook or the catalog at hand.
//!
//! Batch-stage diagnostic codes:
//!
//! | code                   | severity | meaning |
//! |------------------------|----------|---------|
//! | `SECREF_UNKNOWN`       | error    | referenced SEC id does not exist |
//! | `SECREF_KIND_MISMATCH` | error    | person id in a place column or vice versa |
//! | `SEQ_DUPLICATE`        | error    | sequence number used twice |
//! | `SEQ_GAP`              | warning  | missing sequence numbers |
//! | `NO_DOCUMENTS`         | info     | workbook has no document rows |
//! | `LIFESPAN_EXCEEDED`    | error    | death more than 110 years after birth |
//! | `LIFESPAN_NEGATIVE`    | error    | death precedes birth |
//! | `SEC_DUPLICATE_ID`     | error    | two catalog entries share an id |
//! | `SEC_ID_INVALID`       | error    | catalog id fails the `P-`/`L-` form |
//! | `EMPTY_PREFERRED_NAME` | error    | catalog entry with no preferred name |
//! | `DATE_INVALID`         | error    | birth/death value fails the date form |
//! | `URL_MALFORMED` `URL_SCHEME` `URL_UNRECOGNIZED_AUTHORITY` | see [`crate::sec`] |

use crate::check::{check_unit, count_severity, Diagnostic, Severity, Sheet};
use crate::ingest::UnitWorkbook;
use crate::model::{parse_partial_date, SchemaConfig, SequencingMode, ValueKind};
use crate::scanmap::ScanBinding;
use crate::sec::{lint_authority_url, SecCatalog, SecId, SecKind, SecPersonEntry};
use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

/// Acceptance verdict of a report: accepted exactly when no finding is an
/// error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accepted,
    Rejected,
}

/// Finding counts per severity.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeveritySummary {
    pub errors: usize,
    pub warnings: usize,
    pub infos: usize,
}

/// Outcome of a batch validation run over one unit or over the catalog.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Unit id, or `"SEC"` for the catalog report.
    pub subject: String,
    pub generated_at: String,
    pub verdict: Verdict,
    pub summary: SeveritySummary,
    pub findings: Vec<Diagnostic>,
}

impl ValidationReport {
    /// Build a report over a finding list; the verdict is accepted exactly
    /// when no finding is an error.
    pub fn from_findings(subject: &str, findings: Vec<Diagnostic>) -> ValidationReport {
        let summary = SeveritySummary {
            errors: count_severity(&findings, Severity::Error),
            warnings: count_severity(&findings, Severity::Warning),
            infos: count_severity(&findings, Severity::Info),
        };
        ValidationReport {
            subject: subject.to_string(),
            generated_at: Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true),
            verdict: if summary.errors == 0 { Verdict::Accepted } else { Verdict::Rejected },
            summary,
            findings,
        }
    }

    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }
}

#[derive(Debug, Error)]
pub enum SemanticError {
    #[error("unit has validation errors")]
    PreconditionViolated,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Check every SEC reference in the workbook against the catalog.
///
/// A reference must exist in the catalog, and its kind must match the
/// column: a person id in a place column is a mismatch no matter what the
/// catalog holds.
pub fn check_refs(
    workbook: &UnitWorkbook,
    catalog: &SecCatalog,
    schema: &SchemaConfig,
) -> Vec<Diagnostic> {
    let mut findings = Vec::new();
    for (index, record) in workbook.documents.iter().enumerate() {
        let row = (index + 2) as u32;
        for field in &schema.fields {
            let expected = match field.value_kind {
                ValueKind::SecPersonRef => SecKind::Person,
                ValueKind::SecPlaceRef => SecKind::Place,
                _ => continue,
            };
            let raw = record.get(&field.id);
            if raw.is_empty() {
                continue;
            }
            let Ok(id) = raw.parse::<SecId>() else {
                continue; // syntax already reported by the row checks
            };
            if id.kind != expected {
                findings.push(Diagnostic::error(
                    "SECREF_KIND_MISMATCH",
                    Sheet::Documents,
                    row,
                    &field.id,
                    format!(
                        "`{id}` is a {} id but `{}` expects a {}",
                        kind_name(id.kind),
                        field.id,
                        kind_name(expected)
                    ),
                ));
            } else if catalog.resolve_ref(id).is_none() {
                findings.push(Diagnostic::error(
                    "SECREF_UNKNOWN",
                    Sheet::Documents,
                    row,
                    &field.id,
                    format!("`{id}` does not exist in the SEC"),
                ));
            }
        }
    }
    findings
}

fn kind_name(kind: SecKind) -> &'static str {
    match kind {
        SecKind::Person => "person",
        SecKind::Place => "place",
    }
}

/// Check that sequence numbers form `1..n` without duplicates or gaps.
///
/// Per-category mode checks each category's sequences on their own;
/// per-unit mode pools every row. Duplicates are errors; gaps only warn,
/// since re-categorized documents legitimately leave holes.
pub fn check_sequencing(workbook: &UnitWorkbook, mode: SequencingMode) -> Vec<Diagnostic> {
    // group key: category code in per-category mode, 0 in per-unit mode
    let mut groups: BTreeMap<u8, Vec<(u32, u32)>> = BTreeMap::new();
    for (index, record) in workbook.documents.iter().enumerate() {
        let row = (index + 2) as u32;
        let Some(doc_no) = record.doc_no() else { continue };
        let key = match mode {
            SequencingMode::PerCategory => doc_no.category.code(),
            SequencingMode::PerUnit => 0,
        };
        groups.entry(key).or_default().push((row, doc_no.sequence));
    }

    let mut findings = Vec::new();
    for (key, members) in &groups {
        let scope = match mode {
            SequencingMode::PerCategory => format!("category {key}"),
            SequencingMode::PerUnit => "the unit".to_string(),
        };

        let mut seen: BTreeMap<u32, u32> = BTreeMap::new();
        for (row, seq) in members {
            match seen.get(seq) {
                Some(first_row) => findings.push(Diagnostic::error(
                    "SEQ_DUPLICATE",
                    Sheet::Documents,
                    *row,
                    "doc_no",
                    format!("sequence {seq} in {scope} already used in row {first_row}"),
                )),
                None => {
                    seen.insert(*seq, *row);
                }
            }
        }

        let max = members.iter().map(|(_, seq)| *seq).max().unwrap_or(0);
        let missing: Vec<String> =
            (1..=max).filter(|n| !seen.contains_key(n)).map(|n| n.to_string()).collect();
        if !missing.is_empty() {
            let first_row = members.first().map(|(row, _)| *row).unwrap_or(2);
            findings.push(Diagnostic::new(
                Severity::Warning,
                "SEQ_GAP",
                Sheet::Documents,
                first_row,
                "doc_no",
                format!("{scope} is missing sequence number(s) {}", missing.join(", ")),
            ));
        }
    }
    findings
}

/// The 110-year sanity bound on a person's life span.
///
/// Year arithmetic only: the bound is a sanity check, not genealogy. Spans
/// of exactly 110 years pass; anything over fails; a death before the birth
/// is its own finding. Nothing is said when either year is missing or
/// unreadable.
pub fn check_lifespan(person: &SecPersonEntry, row: u32) -> Vec<Diagnostic> {
    let birth = parse_partial_date(person.birth.trim()).ok();
    let death = parse_partial_date(person.death.trim()).ok();
    let (Some(birth), Some(death)) = (birth, death) else {
        return Vec::new();
    };
    let span = i64::from(death.year) - i64::from(birth.year);
    if span < 0 {
        vec![Diagnostic::error(
            "LIFESPAN_NEGATIVE",
            Sheet::Persons,
            row,
            "death",
            format!("`{}`: death year {} precedes birth year {}", person.preferred_name, death.year, birth.year),
        )]
    } else if span > 110 {
        vec![Diagnostic::error(
            "LIFESPAN_EXCEEDED",
            Sheet::Persons,
            row,
            "death",
            format!(
                "`{}`: life span of {span} years exceeds 110 ({} to {})",
                person.preferred_name, birth.year, death.year
            ),
        )]
    } else {
        Vec::new()
    }
}

/// Seed the MAP sheet of an accepted unit: one row per declared card
/// number, role `recto`, scan file left blank for the librarians.
///
/// A unit that already has a MAP sheet is returned unchanged; a unit with
/// validation errors is refused.
pub fn ensure_map_sheet(
    workbook: &mut UnitWorkbook,
    report: &ValidationReport,
) -> Result<(), SemanticError> {
    if !report.accepted() {
        return Err(SemanticError::PreconditionViolated);
    }
    seed_map_sheet(workbook);
    Ok(())
}

fn seed_map_sheet(workbook: &mut UnitWorkbook) {
    if workbook.map.is_some() {
        return;
    }
    let bindings: Vec<ScanBinding> = workbook
        .declared_cards()
        .into_iter()
        .map(|card| ScanBinding::new(card, "recto", ""))
        .collect();
    workbook.map = Some(bindings);
}

/// Run the full batch analysis over one unit.
///
/// Everything the incremental checks find comes first, then catalog
/// cross-references and sequencing. When the unit comes out clean its MAP
/// sheet is created on the spot, ready for the scan mapping work.
pub fn validate_unit(
    workbook: &mut UnitWorkbook,
    catalog: &SecCatalog,
    schema: &SchemaConfig,
) -> ValidationReport {
    let mut findings = check_unit(workbook, schema);
    findings.extend(check_refs(workbook, catalog, schema));
    findings.extend(check_sequencing(workbook, schema.sequencing_mode));
    if workbook.documents.is_empty() {
        findings.push(Diagnostic::new(
            Severity::Info,
            "NO_DOCUMENTS",
            Sheet::Documents,
            1,
            "row",
            "workbook has no document rows",
        ));
    }

    let report = ValidationReport::from_findings(&workbook.unit_id, findings);
    if report.accepted() {
        seed_map_sheet(workbook);
    }
    report
}

/// Validate the whole catalog: ids, names, life spans, and external URLs.
/// The report's subject is `"SEC"`; it goes to the catalog coordinator.
pub fn validate_sec(catalog: &SecCatalog) -> ValidationReport {
    let mut findings = Vec::new();

    let mut seen_person_ids: BTreeMap<String, u32> = BTreeMap::new();
    for (index, person) in catalog.persons.iter().enumerate() {
        let row = (index + 2) as u32;
        lint_entry_common(
            &mut findings,
            Sheet::Persons,
            row,
            &person.id,
            &person.preferred_name,
            &person.external_urls,
            &mut seen_person_ids,
        );
        for (column, value) in [("birth", &person.birth), ("death", &person.death)] {
            if !value.trim().is_empty() && parse_partial_date(value.trim()).is_err() {
                findings.push(Diagnostic::error(
                    "DATE_INVALID",
                    Sheet::Persons,
                    row,
                    column,
                    format!("`{value}` is not a YYYY[-MM[-DD]] date"),
                ));
            }
        }
        findings.extend(check_lifespan(person, row));
    }

    let mut seen_place_ids: BTreeMap<String, u32> = BTreeMap::new();
    for (index, place) in catalog.places.iter().enumerate() {
        let row = (index + 2) as u32;
        lint_entry_common(
            &mut findings,
            Sheet::Places,
            row,
            &place.id,
            &place.preferred_name,
            &place.external_urls,
            &mut seen_place_ids,
        );
    }

    ValidationReport::from_findings("SEC", findings)
}

fn lint_entry_common(
    findings: &mut Vec<Diagnostic>,
    sheet: Sheet,
    row: u32,
    id: &str,
    preferred_name: &str,
    external_urls: &[String],
    seen_ids: &mut BTreeMap<String, u32>,
) {
    match id.parse::<SecId>() {
        Ok(parsed) => match seen_ids.get(&parsed.to_string()) {
            Some(first_row) => findings.push(Diagnostic::error(
                "SEC_DUPLICATE_ID",
                sheet,
                row,
                "id",
                format!("id {parsed} already used in row {first_row}"),
            )),
            None => {
                seen_ids.insert(parsed.to_string(), row);
            }
        },
        Err(e) => findings.push(Diagnostic::error(
            "SEC_ID_INVALID",
            sheet,
            row,
            "id",
            format!("`{id}`: {e}"),
        )),
    }
    if preferred_name.trim().is_empty() {
        findings.push(Diagnostic::error(
            "EMPTY_PREFERRED_NAME",
            sheet,
            row,
            "preferred_name",
            "entry has no preferred name",
        ));
    }
    for url in external_urls {
        findings.extend(lint_authority_url(url, sheet, row, "external_urls"));
    }
}

/// Render a report as deterministic plain text. Apart from the timestamp
/// carried inside the report, output is a pure function of the value.
pub fn render_report(report: &ValidationReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("validation report for {}\n", report.subject));
    out.push_str(&format!("generated: {}\n", report.generated_at));
    let verdict = match report.verdict {
        Verdict::Accepted => "accepted",
        Verdict::Rejected => "rejected",
    };
    out.push_str(&format!("verdict: {verdict}\n"));
    out.push_str(&format!(
        "summary: {}, {}, {} info\n",
        plural(report.summary.errors, "error"),
        plural(report.summary.warnings, "warning"),
        report.summary.infos
    ));

    if !report.findings.is_empty() {
        out.push_str("\nfindings:\n");
        let mut sorted = report.findings.clone();
        sorted.sort_by_key(|d| (d.sheet, d.row));
        for d in &sorted {
            out.push_str(&d.to_string());
            out.push('\n');
        }
    }
    out
}

fn plural(n: usize, noun: &str) -> String {
    if n == 1 {
        format!("1 {noun}")
    } else {
        format!("{n} {noun}s")
    }
}

/// Write `report.json` and `report.txt` into a directory.
pub fn write_report(report: &ValidationReport, dir: &Path) -> std::io::Result<()> {
    let json = serde_json::to_string_pretty(report).expect("report serializes");
    std::fs::write(dir.join("report.json"), json + "\n")?;
    std::fs::write(dir.join("report.txt"), render_report(report))?;
    Ok(())
}

/// Read a previously written `report.json`.
pub fn read_report(dir: &Path) -> Option<ValidationReport> {
    let text = std::fs::read_to_string(dir.join("report.json")).ok()?;
    serde_json::from_str(&text).ok()
}
