//! Pure domain types and total parsing/formatting functions.

mod category;
mod date;
mod docnum;
mod record;
mod schema;
mod shelfmark;

pub use category::Category;
pub use date::{
    days_in_month, parse_date_expression, parse_partial_date, partial_date_exists, DateError,
    DateExpression, DateKind, DateQualifier, PartialDate, Precision,
};
pub use docnum::{parse_document_number, DocumentNumber, DocumentNumberError};
pub use record::{DocumentRecord, MetricRecord, ParsedRow, TypedValue, METRIC_KEYS};
pub use schema::{
    applicable_fields, blocked_fields, FieldSpec, SchemaConfig, SchemaError, SequencingMode,
    ValueKind,
};
pub use shelfmark::{parse_shelfmark, slugify, Shelfmark, ShelfmarkError, SHELFMARK_PREFIX};
