//! Card-to-scan bindings, the scan folder convention, and coverage checks.
//!
//! A single card often needs more than a recto and a verso scan (paste-in
//! slips get their own files), so bindings are one-to-many: any number of
//! rows may share a card number as long as their roles differ.

use crate::check::{Diagnostic, Severity, Sheet};
use crate::ingest::UnitWorkbook;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use thiserror::Error;

/// One MAP-sheet row binding a card number to a scan file.
///
/// `role` is an open token (`recto`, `verso`, `slip-1`, ...); `scan_file` is
/// a path relative to the unit's scan folder and stays empty until the
/// librarian fills the row in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanBinding {
    pub card_no: u32,
    pub role: String,
    pub scan_file: String,
}

impl ScanBinding {
    pub fn new(card_no: u32, role: impl Into<String>, scan_file: impl Into<String>) -> Self {
        ScanBinding { card_no, role: role.into(), scan_file: scan_file.into() }
    }
}

/// An inclusive card-number range from the `cards` field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CardRange {
    pub start: u32,
    pub end: u32,
}

impl CardRange {
    pub fn new(start: u32, end: u32) -> Result<Self, CardRangeError> {
        if start == 0 || end == 0 {
            return Err(CardRangeError::GrammarMismatch);
        }
        if start > end {
            return Err(CardRangeError::ReversedRange);
        }
        Ok(CardRange { start, end })
    }

    pub fn single(n: u32) -> Result<Self, CardRangeError> {
        CardRange::new(n, n)
    }

    pub fn cards(&self) -> impl Iterator<Item = u32> {
        self.start..=self.end
    }
}

impl fmt::Display for CardRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start == self.end {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}-{}", self.start, self.end)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CardRangeError {
    #[error("card range does not match `N` or `N-N`")]
    GrammarMismatch,
    #[error("card range end precedes start")]
    ReversedRange,
}

impl FromStr for CardRange {
    type Err = CardRangeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('-') {
            None => CardRange::single(parse_card_no(s)?),
            Some((a, b)) => CardRange::new(parse_card_no(a)?, parse_card_no(b)?),
        }
    }
}

fn parse_card_no(s: &str) -> Result<u32, CardRangeError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(CardRangeError::GrammarMismatch);
    }
    s.parse().map_err(|_| CardRangeError::GrammarMismatch)
}

/// Parse a comma-separated list of card ranges, order preserved.
pub fn parse_card_range(s: &str) -> Result<Vec<CardRange>, CardRangeError> {
    if s.is_empty() {
        return Err(CardRangeError::GrammarMismatch);
    }
    s.split(',').map(str::parse).collect()
}

/// Every card number named in the list, ascending and deduplicated.
pub fn card_set(ranges: &[CardRange]) -> BTreeSet<u32> {
    ranges.iter().flat_map(CardRange::cards).collect()
}

/// The scan folder for a unit: `<root>/<first letter of slug>/<unit_id>/`.
///
/// Pure path arithmetic; sharding by first letter keeps any one directory
/// from holding tens of thousands of children.
pub fn resolve_scan_folder(unit_id: &str, root: &Path) -> PathBuf {
    let shard = unit_id.chars().next().map(|c| c.to_string()).unwrap_or_else(|| "_".to_string());
    root.join(shard).join(unit_id)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CoverageError {
    #[error("unit has no MAP sheet")]
    MapSheetAbsent,
}

/// Check that bindings, scan files, and declared card ranges line up.
///
/// `files` is the listing of the unit's scan folder, relative paths. Emits
/// `SCAN_MISSING` for bindings whose file is absent, `CARD_UNBOUND` for
/// declared cards with no binding at all, and `SCAN_UNMAPPED` for files no
/// binding references.
pub fn check_coverage(
    workbook: &UnitWorkbook,
    files: &[String],
) -> Result<Vec<Diagnostic>, CoverageError> {
    let map = workbook.map.as_ref().ok_or(CoverageError::MapSheetAbsent)?;
    let file_set: BTreeSet<&str> = files.iter().map(String::as_str).collect();
    let mut findings = Vec::new();

    let mut referenced: BTreeSet<&str> = BTreeSet::new();
    for (index, binding) in map.iter().enumerate() {
        let row = (index + 2) as u32; // header is row 1
        if !binding.scan_file.is_empty() {
            referenced.insert(binding.scan_file.as_str());
        }
        if !file_set.contains(binding.scan_file.as_str()) {
            findings.push(Diagnostic::new(
                Severity::Error,
                "SCAN_MISSING",
                Sheet::Map,
                row,
                "scan_file",
                format!(
                    "card {} role `{}`: scan file `{}` not found in the scan folder",
                    binding.card_no, binding.role, binding.scan_file
                ),
            ));
        }
    }

    let bound: BTreeSet<u32> = map.iter().map(|b| b.card_no).collect();
    for card in workbook.declared_cards() {
        if !bound.contains(&card) {
            findings.push(Diagnostic::new(
                Severity::Error,
                "CARD_UNBOUND",
                Sheet::Map,
                1,
                "card_no",
                format!("card {card} is declared in `cards` but has no binding"),
            ));
        }
    }

    for file in files {
        if !referenced.contains(file.as_str()) {
            findings.push(Diagnostic::new(
                Severity::Warning,
                "SCAN_UNMAPPED",
                Sheet::Map,
                1,
                "scan_file",
                format!("scan file `{file}` is not referenced by any binding"),
            ));
        }
    }

    Ok(findings)
}
