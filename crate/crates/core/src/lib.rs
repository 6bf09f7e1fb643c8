//! Archival metadata acquisition, validation, and export toolkit.
//!
//! The library models a digitization back end for large autograph
//! collections: per-unit metadata workbooks (a metric sheet plus one row per
//! described document), a person/place authority catalog, two validation
//! stages (incremental per-row checks and full batch semantics), card-to-scan
//! mapping, a unit lifecycle state machine with batch assembly, and exports
//! to EDM, CIDOC-CRM-style RDF, EAD XML, and Dublin Core.
//!
//! Everything on disk is plain UTF-8 (CSV sheets, JSON manifests and
//! reports, TOML schema), so stores are diff-able and any file share or sync
//! layer can carry them.

pub mod check;
pub mod export;
pub mod ingest;
pub mod model;
pub mod pipeline;
pub mod scanmap;
pub mod sec;
pub mod semantic;

pub use check::{check_row, check_unit, Diagnostic, Severity, Sheet};
pub use ingest::{load_unit_workbook, migrate_workbook, save_unit_workbook, UnitWorkbook};
pub use model::{Category, DateExpression, DocumentNumber, SchemaConfig, Shelfmark};
pub use sec::{SecCatalog, SecId, SecKind};
pub use semantic::{validate_sec, validate_unit, ValidationReport, Verdict};
