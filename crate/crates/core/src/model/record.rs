//! Metric and document records.
//!
//! Cell values stay raw text until validation parses them; the typed view is
//! produced by the checking pass, mirroring how the spreadsheets are filled
//! in long before they are clean.

use super::{DateExpression, DocumentNumber, Shelfmark};
use crate::scanmap::CardRange;
use crate::sec::SecId;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Unit-level description: the metric sheet as raw key/value text.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricRecord {
    pub title: String,
    pub shelfmark: String,
    pub card_count: String,
    pub format: String,
    pub remarks: String,
    /// Keys beyond the standard five, preserved for round-tripping.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, String>,
}

/// The standard metric keys, in sheet order.
pub const METRIC_KEYS: [&str; 5] = ["title", "shelfmark", "card_count", "format", "remarks"];

impl MetricRecord {
    /// A metric is complete once title and shelfmark are filled in.
    pub fn is_complete(&self) -> bool {
        !self.title.trim().is_empty() && !self.shelfmark.trim().is_empty()
    }

    pub fn parsed_shelfmark(&self) -> Option<Shelfmark> {
        self.shelfmark.parse().ok()
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        match key {
            "title" => Some(&self.title),
            "shelfmark" => Some(&self.shelfmark),
            "card_count" => Some(&self.card_count),
            "format" => Some(&self.format),
            "remarks" => Some(&self.remarks),
            _ => self.extra.get(key).map(String::as_str),
        }
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        let value = value.into();
        match key {
            "title" => self.title = value,
            "shelfmark" => self.shelfmark = value,
            "card_count" => self.card_count = value,
            "format" => self.format = value,
            "remarks" => self.remarks = value,
            _ => {
                self.extra.insert(key.to_string(), value);
            }
        }
    }
}

/// One documents-sheet row: raw cell text per field id.
///
/// Only non-empty cells are stored; an absent key and an empty cell are the
/// same thing.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentRecord {
    pub values: BTreeMap<String, String>,
}

impl DocumentRecord {
    pub fn new() -> DocumentRecord {
        DocumentRecord::default()
    }

    pub fn with(mut self, field: &str, value: &str) -> DocumentRecord {
        self.set(field, value);
        self
    }

    pub fn get(&self, field: &str) -> &str {
        self.values.get(field).map(String::as_str).unwrap_or("")
    }

    pub fn set(&mut self, field: &str, value: impl Into<String>) {
        let value = value.into();
        if value.is_empty() {
            self.values.remove(field);
        } else {
            self.values.insert(field.to_string(), value);
        }
    }

    /// The parsed document number, if the `doc_no` cell holds one.
    pub fn doc_no(&self) -> Option<DocumentNumber> {
        self.get("doc_no").parse().ok()
    }

    /// The category, if it can be read off the document number.
    pub fn category(&self) -> Option<super::Category> {
        self.doc_no().map(|d| d.category)
    }
}

/// A raw cell value after typing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum TypedValue {
    Text(String),
    DocNumber(DocumentNumber),
    Date(DateExpression),
    SecRef(SecId),
    Cards(Vec<CardRange>),
    Url(String),
    Integer(i64),
}

/// The fully typed view of a row: field id to parsed value.
pub type ParsedRow = BTreeMap<String, TypedValue>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metric_completeness() {
        let mut m = MetricRecord::default();
        assert!(!m.is_complete());
        m.title = "Letters of J. Keppler".into();
        assert!(!m.is_complete());
        m.shelfmark = "SA, Keppler, Johannes".into();
        assert!(m.is_complete());
        m.title = "   ".into();
        assert!(!m.is_complete());
    }

    #[test]
    fn empty_cells_are_absent() {
        let mut r = DocumentRecord::new().with("title", "A letter");
        assert_eq!(r.get("title"), "A letter");
        assert_eq!(r.get("date"), "");
        r.set("title", "");
        assert!(r.values.is_empty());
    }

    #[test]
    fn category_comes_from_doc_no() {
        let r = DocumentRecord::new().with("doc_no", "2.5");
        assert_eq!(r.category().map(|c| c.code()), Some(2));
        let bad = DocumentRecord::new().with("doc_no", "99");
        assert_eq!(bad.category(), None);
    }
}
