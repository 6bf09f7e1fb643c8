//! Import adapter for spreadsheet workbooks.
//!
//! Maps the sheet names `Metric`, `Documents`, and `MAP` onto the logical
//! model. Formatting is ignored: cell colors and the leading annotation
//! column (an empty header cell) carry validator output, not data, and are
//! dropped on import.

use super::{documents_from_rows, map_from_rows, validate_header, IngestError, UnitWorkbook};
use crate::model::{slugify, MetricRecord, SchemaConfig};
use calamine::{Data, Reader, Xlsx};
use std::io::BufReader;
use std::path::Path;

fn cell_text(cell: &Data) -> String {
    match cell {
        Data::Empty => String::new(),
        Data::String(s) => s.clone(),
        Data::Float(f) => {
            // spreadsheets store integers as floats
            if f.fract() == 0.0 && f.abs() < 1e15 {
                format!("{}", *f as i64)
            } else {
                f.to_string()
            }
        }
        Data::Int(i) => i.to_string(),
        Data::Bool(b) => b.to_string(),
        Data::DateTime(dt) => dt.to_string(),
        Data::DateTimeIso(s) | Data::DurationIso(s) => s.clone(),
        Data::Error(e) => format!("#ERR:{e:?}"),
    }
}

fn sheet_rows(
    workbook: &mut Xlsx<BufReader<std::fs::File>>,
    name: &str,
) -> Result<Option<Vec<Vec<String>>>, IngestError> {
    match workbook.worksheet_range(name) {
        Ok(range) => {
            let rows = range
                .rows()
                .map(|row| row.iter().map(cell_text).collect::<Vec<String>>())
                .collect();
            Ok(Some(rows))
        }
        Err(calamine::XlsxError::WorksheetNotFound(_)) => Ok(None),
        Err(e) => Err(IngestError::UnreadableFile(e.to_string())),
    }
}

fn trim_trailing_empty(mut rows: Vec<Vec<String>>) -> Vec<Vec<String>> {
    while rows.last().is_some_and(|row| row.iter().all(String::is_empty)) {
        rows.pop();
    }
    rows
}

/// Strip the annotation column: a leading column whose header cell is empty
/// holds per-row validator messages, not data.
fn strip_annotation_column(rows: Vec<Vec<String>>) -> Vec<Vec<String>> {
    let strip = rows.first().map(|h| h.first().is_some_and(String::is_empty)).unwrap_or(false);
    if !strip {
        return rows;
    }
    rows.into_iter()
        .map(|row| row.into_iter().skip(1).collect())
        .collect()
}

/// Read a spreadsheet unit workbook.
///
/// The result is the same workbook the canonical CSV directory would give:
/// the unit id is derived from the metric's shelfmark, and headers are
/// checked against the schema exactly like [`super::load_unit_workbook`].
pub fn import_xlsx(path: &Path, schema: &SchemaConfig) -> Result<UnitWorkbook, IngestError> {
    let mut workbook: Xlsx<_> =
        calamine::open_workbook(path).map_err(|e: calamine::XlsxError| {
            IngestError::UnreadableFile(e.to_string())
        })?;

    let metric_rows = sheet_rows(&mut workbook, "Metric")?
        .ok_or_else(|| IngestError::MissingSheet("Metric".to_string()))?;
    let mut metric = MetricRecord::default();
    for row in trim_trailing_empty(metric_rows) {
        let key = row.first().map(String::as_str).unwrap_or("");
        if key.is_empty() {
            continue;
        }
        metric.set(key, row.get(1).map(String::as_str).unwrap_or(""));
    }

    let doc_rows = sheet_rows(&mut workbook, "Documents")?
        .ok_or_else(|| IngestError::MissingSheet("Documents".to_string()))?;
    let mut doc_rows = strip_annotation_column(trim_trailing_empty(doc_rows));
    let header: Vec<String> = if doc_rows.is_empty() { Vec::new() } else { doc_rows.remove(0) };
    let header: Vec<String> = header.into_iter().take_while(|h| !h.is_empty()).collect();
    let doc_rows: Vec<Vec<String>> =
        doc_rows.into_iter().map(|row| row.into_iter().take(header.len()).collect()).collect();
    validate_header(&header, schema)?;
    let documents = documents_from_rows(&header, doc_rows);

    let map = match sheet_rows(&mut workbook, "MAP")? {
        Some(rows) => {
            let mut rows = trim_trailing_empty(rows);
            let map_header: Vec<String> = if rows.is_empty() { Vec::new() } else { rows.remove(0) };
            Some(map_from_rows(&map_header, rows)?)
        }
        None => None,
    };

    let unit_id = {
        let slug = slugify(&metric.shelfmark);
        if slug.is_empty() {
            "unnamed-unit".to_string()
        } else {
            slug
        }
    };

    Ok(UnitWorkbook {
        unit_id,
        shelfmark: metric.shelfmark.clone(),
        schema_version: schema.version,
        metric,
        columns: header,
        documents,
        map,
    })
}
