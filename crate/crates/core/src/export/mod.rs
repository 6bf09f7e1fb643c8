//! Knowledge-graph and archival exchange exports for accepted units.
//!
//! All exporters are pure transformations from validated workbooks plus the
//! catalog snapshot: EDM and event-centric RDF come out as triples (see
//! [`turtle`] for the canonical serialization), finding aids as EAD XML, and
//! the metric as Dublin Core pairs.
//!
//! Local IRIs are minted from a configurable base ([`IriPolicy`]); external
//! authority URLs are attached as `owl:sameAs` links rather than used as
//! subjects, since local ids are stable and authority URLs can change.
//!
//! The field-to-term and category-to-event tables live in
//! `docs/mappings.md`; the event mapping is overridable through
//! [`EventMapping`].

mod cidoc;
mod ead;
mod edm;
pub mod turtle;
pub mod vocab;

pub use cidoc::{export_cidoc, export_cidoc_with, EventMapping};
pub use ead::{export_ead, CollectionMeta};
pub use edm::export_edm;
pub use turtle::serialize_turtle;

use crate::ingest::UnitWorkbook;
use crate::model::Category;
use crate::semantic::ValidationReport;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// An RDF object: IRI or literal. Plain literals carry `xsd:string`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Object {
    Iri(String),
    Literal { lexical: String, datatype: Option<String>, lang: Option<String> },
}

impl Object {
    pub fn iri(iri: impl Into<String>) -> Object {
        Object::Iri(iri.into())
    }

    pub fn plain(lexical: impl Into<String>) -> Object {
        Object::Literal {
            lexical: lexical.into(),
            datatype: Some(format!("{}string", vocab::XSD)),
            lang: None,
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: &str) -> Object {
        Object::Literal { lexical: lexical.into(), datatype: Some(datatype.to_string()), lang: None }
    }
}

/// One RDF triple with absolute IRIs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GraphTriple {
    pub subject: String,
    pub predicate: String,
    pub object: Object,
}

impl GraphTriple {
    pub fn new(subject: impl Into<String>, predicate: impl Into<String>, object: Object) -> GraphTriple {
        GraphTriple { subject: subject.into(), predicate: predicate.into(), object }
    }
}

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("unit `{0}` is not accepted")]
    UnitNotAccepted(String),
    #[error("nothing to export")]
    EmptyInput,
    #[error("metric is incomplete (title and shelfmark required)")]
    MetricIncomplete,
    #[error("invalid IRI base `{0}`: must be absolute and end with `/`")]
    InvalidBase(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn encode_segment(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for byte in s.bytes() {
        match byte {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'-' | b'.' | b'_' | b'~' => {
                out.push(byte as char)
            }
            other => out.push_str(&format!("%{other:02X}")),
        }
    }
    out
}

/// Mints local IRIs for every entity class from one base.
///
/// Segments are percent-encoded, so distinct ids always produce distinct
/// IRIs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IriPolicy {
    base: String,
}

impl IriPolicy {
    pub fn new(base: &str) -> Result<IriPolicy, ExportError> {
        let has_scheme = base
            .split_once(':')
            .is_some_and(|(scheme, _)| !scheme.is_empty() && scheme.chars().all(|c| c.is_ascii_alphanumeric() || c == '+' || c == '-'));
        if !has_scheme || !base.ends_with('/') {
            return Err(ExportError::InvalidBase(base.to_string()));
        }
        Ok(IriPolicy { base: base.to_string() })
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    fn join(&self, class: &str, segments: &[&str]) -> String {
        let mut iri = format!("{}{class}", self.base);
        for segment in segments {
            iri.push('/');
            iri.push_str(&encode_segment(segment));
        }
        iri
    }

    pub fn unit(&self, unit_id: &str) -> String {
        self.join("unit", &[unit_id])
    }

    pub fn document(&self, unit_id: &str, doc_no: &str) -> String {
        self.join("document", &[unit_id, doc_no])
    }

    pub fn aggregation(&self, unit_id: &str, doc_no: &str) -> String {
        self.join("aggregation", &[unit_id, doc_no])
    }

    pub fn event(&self, unit_id: &str, doc_no: &str) -> String {
        self.join("event", &[unit_id, doc_no])
    }

    pub fn timespan(&self, unit_id: &str, doc_no: &str) -> String {
        self.join("timespan", &[unit_id, doc_no])
    }

    pub fn agent(&self, sec_id: &str) -> String {
        self.join("agent", &[sec_id])
    }

    pub fn place(&self, sec_id: &str) -> String {
        self.join("place", &[sec_id])
    }

    pub fn scan(&self, unit_id: &str, scan_file: &str) -> String {
        self.join("scan", &[unit_id, scan_file])
    }
}

impl Default for IriPolicy {
    fn default() -> Self {
        IriPolicy::new("https://data.example.org/archive/").expect("default base is valid")
    }
}

/// The agent description fields for a category: `(free-text id, SEC-ref id)`.
///
/// Correspondence names a sender, creative works an author, official
/// documents an issuer; the remaining categories carry no agent field.
pub fn agent_fields(category: Category) -> Option<(&'static str, &'static str)> {
    match category.code() {
        2 | 7 => Some(("sender", "sender_sec")),
        3 => Some(("author", "author_sec")),
        4 | 5 => Some(("issuer", "issuer_sec")),
        _ => None,
    }
}

fn require_accepted(workbook: &UnitWorkbook, report: &ValidationReport) -> Result<(), ExportError> {
    if !report.accepted() || report.subject != workbook.unit_id {
        return Err(ExportError::UnitNotAccepted(workbook.unit_id.clone()));
    }
    Ok(())
}

/// Map a complete metric onto Dublin Core term/value pairs.
///
/// Deterministic order: title, identifier (the shelfmark), format, extent
/// (the card count). Empty metric fields are omitted.
pub fn export_dc(workbook: &UnitWorkbook) -> Result<Vec<(String, String)>, ExportError> {
    if !workbook.metric.is_complete() {
        return Err(ExportError::MetricIncomplete);
    }
    let metric = &workbook.metric;
    let mut pairs = Vec::new();
    let mut push = |term: &str, value: &str| {
        if !value.is_empty() {
            pairs.push((term.to_string(), value.to_string()));
        }
    };
    push("title", &metric.title);
    push("identifier", &metric.shelfmark);
    push("format", &metric.format);
    push("extent", &metric.card_count);
    Ok(pairs)
}

/// Render Dublin Core pairs as the `dc.csv` sheet.
pub fn dc_to_csv(pairs: &[(String, String)]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(["term", "value"]).expect("csv write");
    for (term, value) in pairs {
        writer.write_record([term, value]).expect("csv write");
    }
    String::from_utf8(writer.into_inner().expect("csv flush")).expect("csv utf-8")
}
