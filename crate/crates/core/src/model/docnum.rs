//! Document numbers in the `x.y` form.
//!
//! `x` is the category digit and `y` the sequential number of the document.
//! The canonical text form has no padding and no whitespace, so parse/format
//! round-trips are exact and sequencing checks stay unambiguous.

use super::Category;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// A parsed document number such as `2.13`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DocumentNumber {
    pub category: Category,
    pub sequence: u32,
}

impl DocumentNumber {
    pub fn new(category: Category, sequence: u32) -> Result<Self, DocumentNumberError> {
        if sequence == 0 {
            return Err(DocumentNumberError::SequenceNotPositiveInteger);
        }
        Ok(DocumentNumber { category, sequence })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DocumentNumberError {
    #[error("document number must be two dot-separated parts")]
    NotTwoParts,
    #[error("category digit must be between 1 and 9")]
    CategoryOutOfRange,
    #[error("sequence must be a positive integer")]
    SequenceNotPositiveInteger,
    #[error("document number is not in canonical form (no leading zeros or whitespace)")]
    NonCanonicalForm,
}

impl fmt::Display for DocumentNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.category.code(), self.sequence)
    }
}

impl FromStr for DocumentNumber {
    type Err = DocumentNumberError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_document_number(s)
    }
}

/// Parse the canonical `<category digit>.<sequence>` form.
pub fn parse_document_number(s: &str) -> Result<DocumentNumber, DocumentNumberError> {
    let mut parts = s.split('.');
    let (cat, seq) = match (parts.next(), parts.next(), parts.next()) {
        (Some(c), Some(q), None) if !c.is_empty() && !q.is_empty() => (c, q),
        _ => return Err(DocumentNumberError::NotTwoParts),
    };

    if !cat.bytes().all(|b| b.is_ascii_digit()) || !seq.bytes().all(|b| b.is_ascii_digit()) {
        return Err(DocumentNumberError::NonCanonicalForm);
    }

    let cat_value: u32 = cat.parse().map_err(|_| DocumentNumberError::CategoryOutOfRange)?;
    if !(1..=9).contains(&cat_value) {
        return Err(DocumentNumberError::CategoryOutOfRange);
    }
    if cat.len() != 1 {
        // a value in range spelled with leading zeros, e.g. "03"
        return Err(DocumentNumberError::NonCanonicalForm);
    }
    let category = Category::from_code(cat_value as u8).expect("range checked");

    let sequence: u32 = seq.parse().map_err(|_| DocumentNumberError::SequenceNotPositiveInteger)?;
    if sequence == 0 {
        return Err(DocumentNumberError::SequenceNotPositiveInteger);
    }
    if seq != sequence.to_string() {
        return Err(DocumentNumberError::NonCanonicalForm);
    }

    Ok(DocumentNumber { category, sequence })
}
