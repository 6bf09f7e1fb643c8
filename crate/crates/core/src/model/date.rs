//! Date expressions for the `date` field.
//!
//! The accepted grammar is a compact, machine-checkable subset of the EDTF
//! conventions used across cultural-heritage metadata:
//!
//! ```text
//! DATE := P | P "/" P | P "/.." | "~"P | "?"P
//! P    := YYYY | YYYY-MM | YYYY-MM-DD
//! ```
//!
//! `~` marks an approximate date, `?` an uncertain one. Every full date must
//! exist in the proleptic Gregorian calendar; ranges must not be reversed.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// How much of a date is given.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Precision {
    Year,
    YearMonth,
    YearMonthDay,
}

/// A date known down to year, month, or day.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PartialDate {
    pub year: u16,
    pub month: Option<u8>,
    pub day: Option<u8>,
}

impl PartialDate {
    pub fn year(year: u16) -> Self {
        PartialDate { year, month: None, day: None }
    }

    pub fn year_month(year: u16, month: u8) -> Self {
        PartialDate { year, month: Some(month), day: None }
    }

    pub fn ymd(year: u16, month: u8, day: u8) -> Self {
        PartialDate { year, month: Some(month), day: Some(day) }
    }

    pub fn precision(&self) -> Precision {
        match (self.month, self.day) {
            (None, _) => Precision::Year,
            (Some(_), None) => Precision::YearMonth,
            (Some(_), Some(_)) => Precision::YearMonthDay,
        }
    }

    /// Earliest calendar day covered by this date.
    pub fn lower_bound(&self) -> (u16, u8, u8) {
        let month = self.month.unwrap_or(1);
        (self.year, month, self.day.unwrap_or(1))
    }

    /// Latest calendar day covered by this date.
    pub fn upper_bound(&self) -> (u16, u8, u8) {
        let month = self.month.unwrap_or(12);
        let day = self.day.unwrap_or_else(|| days_in_month(self.year, month));
        (self.year, month, day)
    }

    /// Compare two partial dates at the coarser of their precisions.
    pub fn cmp_at_coarser_precision(&self, other: &PartialDate) -> std::cmp::Ordering {
        let precision = self.precision().min(other.precision());
        let key = |d: &PartialDate| match precision {
            Precision::Year => (d.year, 0, 0),
            Precision::YearMonth => (d.year, d.month.unwrap_or(0), 0),
            Precision::YearMonthDay => (d.year, d.month.unwrap_or(0), d.day.unwrap_or(0)),
        };
        key(self).cmp(&key(other))
    }
}

impl fmt::Display for PartialDate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}", self.year)?;
        if let Some(m) = self.month {
            write!(f, "-{m:02}")?;
        }
        if let Some(d) = self.day {
            write!(f, "-{d:02}")?;
        }
        Ok(())
    }
}

/// Structure of a date expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DateKind {
    Single,
    Range,
    OpenRange,
}

/// Qualifier attached to a single date.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DateQualifier {
    Exact,
    Approximate,
    Uncertain,
}

/// A fully parsed `date` field value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DateExpression {
    pub kind: DateKind,
    pub start: PartialDate,
    pub end: Option<PartialDate>,
    pub qualifier: DateQualifier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DateError {
    #[error("date does not match the accepted grammar")]
    GrammarMismatch,
    #[error("date does not exist in the calendar")]
    CalendarInvalid,
    #[error("range end precedes range start")]
    RangeReversed,
}

impl fmt::Display for DateExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.qualifier {
            DateQualifier::Approximate => write!(f, "~")?,
            DateQualifier::Uncertain => write!(f, "?")?,
            DateQualifier::Exact => {}
        }
        write!(f, "{}", self.start)?;
        match self.kind {
            DateKind::Single => Ok(()),
            DateKind::Range => write!(f, "/{}", self.end.expect("range has an end")),
            DateKind::OpenRange => write!(f, "/.."),
        }
    }
}

impl FromStr for DateExpression {
    type Err = DateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_date_expression(s)
    }
}

/// Parse a `date` field value, checking calendar existence of full dates.
pub fn parse_date_expression(s: &str) -> Result<DateExpression, DateError> {
    if let Some(rest) = s.strip_prefix('~') {
        let start = parse_partial(rest)?;
        return Ok(DateExpression {
            kind: DateKind::Single,
            start,
            end: None,
            qualifier: DateQualifier::Approximate,
        });
    }
    if let Some(rest) = s.strip_prefix('?') {
        let start = parse_partial(rest)?;
        return Ok(DateExpression {
            kind: DateKind::Single,
            start,
            end: None,
            qualifier: DateQualifier::Uncertain,
        });
    }

    match s.split_once('/') {
        None => Ok(DateExpression {
            kind: DateKind::Single,
            start: parse_partial(s)?,
            end: None,
            qualifier: DateQualifier::Exact,
        }),
        Some((head, "..")) => Ok(DateExpression {
            kind: DateKind::OpenRange,
            start: parse_partial(head)?,
            end: None,
            qualifier: DateQualifier::Exact,
        }),
        Some((head, tail)) => {
            let start = parse_partial(head)?;
            let end = parse_partial(tail)?;
            if start.cmp_at_coarser_precision(&end) == std::cmp::Ordering::Greater {
                return Err(DateError::RangeReversed);
            }
            Ok(DateExpression { kind: DateKind::Range, start, end: Some(end), qualifier: DateQualifier::Exact })
        }
    }
}

/// Parse a bare partial date (`YYYY`, `YYYY-MM`, or `YYYY-MM-DD`), as used
/// by the catalog's birth and death columns.
pub fn parse_partial_date(s: &str) -> Result<PartialDate, DateError> {
    parse_partial(s)
}

fn parse_partial(s: &str) -> Result<PartialDate, DateError> {
    let mut parts = s.split('-');
    let year = parts.next().ok_or(DateError::GrammarMismatch)?;
    let month = parts.next();
    let day = parts.next();
    if parts.next().is_some() {
        return Err(DateError::GrammarMismatch);
    }

    let year = parse_fixed_digits(year, 4)? as u16;
    let month = month.map(|m| parse_fixed_digits(m, 2)).transpose()?.map(|m| m as u8);
    let day = day.map(|d| parse_fixed_digits(d, 2)).transpose()?.map(|d| d as u8);

    let date = PartialDate { year, month, day };
    if !partial_date_exists(&date) {
        return Err(DateError::CalendarInvalid);
    }
    Ok(date)
}

fn parse_fixed_digits(s: &str, width: usize) -> Result<u32, DateError> {
    if s.len() != width || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(DateError::GrammarMismatch);
    }
    s.parse().map_err(|_| DateError::GrammarMismatch)
}

/// Calendar existence of a partial date, proleptic Gregorian for all years.
pub fn partial_date_exists(d: &PartialDate) -> bool {
    match (d.month, d.day) {
        (None, _) => true,
        (Some(m), None) => (1..=12).contains(&m),
        (Some(m), Some(day)) => {
            NaiveDate::from_ymd_opt(i32::from(d.year), u32::from(m), u32::from(day)).is_some()
        }
    }
}

/// Number of days in the given month, proleptic Gregorian.
pub fn days_in_month(year: u16, month: u8) -> u8 {
    // walk back from the first of the next month
    let (ny, nm) = if month == 12 { (i32::from(year) + 1, 1) } else { (i32::from(year), u32::from(month) + 1) };
    NaiveDate::from_ymd_opt(ny, nm, 1)
        .and_then(|d| d.pred_opt())
        .map(|d| chrono::Datelike::day(&d) as u8)
        .unwrap_or(31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_date_single_exact() {
        let d = parse_date_expression("1832-03-22").unwrap();
        assert_eq!(d.kind, DateKind::Single);
        assert_eq!(d.qualifier, DateQualifier::Exact);
        assert_eq!(d.start.precision(), Precision::YearMonthDay);
        assert_eq!(d.start, PartialDate::ymd(1832, 3, 22));
    }

    #[test]
    fn century_years_are_not_leap() {
        // 1900 is divisible by 100 but not 400
        assert_eq!(parse_date_expression("1900-02-29"), Err(DateError::CalendarInvalid));
        assert!(parse_date_expression("2000-02-29").is_ok());
        assert!(parse_date_expression("1904-02-29").is_ok());
    }

    #[test]
    fn year_range() {
        let d = parse_date_expression("1820/1825").unwrap();
        assert_eq!(d.kind, DateKind::Range);
        assert_eq!(d.start, PartialDate::year(1820));
        assert_eq!(d.end, Some(PartialDate::year(1825)));
        assert_eq!(d.start.precision(), Precision::Year);
    }

    #[test]
    fn approximate_single() {
        let d = parse_date_expression("~1750").unwrap();
        assert_eq!(d.kind, DateKind::Single);
        assert_eq!(d.qualifier, DateQualifier::Approximate);
        assert_eq!(d.start, PartialDate::year(1750));
    }

    #[test]
    fn uncertain_single() {
        let d = parse_date_expression("?1750-06").unwrap();
        assert_eq!(d.qualifier, DateQualifier::Uncertain);
        assert_eq!(d.start, PartialDate::year_month(1750, 6));
    }

    #[test]
    fn open_range() {
        let d = parse_date_expression("1750/..").unwrap();
        assert_eq!(d.kind, DateKind::OpenRange);
        assert_eq!(d.end, None);
    }

    #[test]
    fn reversed_range() {
        assert_eq!(parse_date_expression("1825/1820"), Err(DateError::RangeReversed));
        assert_eq!(parse_date_expression("1820-05-02/1820-05-01"), Err(DateError::RangeReversed));
    }

    #[test]
    fn mixed_precision_ranges_compare_at_coarser_precision() {
        // both cover 1820, so neither is after the other at year precision
        assert!(parse_date_expression("1820-06/1820").is_ok());
        assert!(parse_date_expression("1820/1820-02").is_ok());
        assert_eq!(parse_date_expression("1821/1820-12"), Err(DateError::RangeReversed));
    }

    #[test]
    fn grammar_rejects() {
        for s in ["", "22.03.1832", "1832-3-22", "183", "18320", "~", "?", "1820/", "/1820", "1820/../..", "1820-01-01-01", "~1820/1825"] {
            assert_eq!(parse_date_expression(s), Err(DateError::GrammarMismatch), "input {s:?}");
        }
    }

    #[test]
    fn month_bounds() {
        assert_eq!(parse_date_expression("1820-13"), Err(DateError::CalendarInvalid));
        assert_eq!(parse_date_expression("1820-00"), Err(DateError::CalendarInvalid));
        assert_eq!(parse_date_expression("1820-04-31"), Err(DateError::CalendarInvalid));
        assert_eq!(parse_date_expression("1820-04-00"), Err(DateError::CalendarInvalid));
    }

    #[test]
    fn display_round_trips() {
        for s in ["1832-03-22", "1820/1825", "~1750", "?1750-06", "1750/..", "1820-06/1820"] {
            let d = parse_date_expression(s).unwrap();
            assert_eq!(d.to_string(), s);
        }
    }

    #[test]
    fn upper_bound_respects_month_lengths() {
        assert_eq!(PartialDate::year(1820).upper_bound(), (1820, 12, 31));
        assert_eq!(PartialDate::year_month(1820, 2).upper_bound(), (1820, 2, 29));
        assert_eq!(PartialDate::year_month(1821, 2).upper_bound(), (1821, 2, 28));
        assert_eq!(PartialDate::ymd(1820, 2, 7).upper_bound(), (1820, 2, 7));
    }
}
