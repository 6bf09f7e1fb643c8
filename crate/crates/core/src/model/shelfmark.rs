//! Unit shelfmarks of the form `SA, <Name>`.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Shelfmark prefix shared by every unit in the autograph collection.
pub const SHELFMARK_PREFIX: &str = "SA";

/// A unit shelfmark: the `SA` designation followed by a surname-first name.
///
/// The name is preserved verbatim, so parse and format round-trip exactly.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Shelfmark {
    name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ShelfmarkError {
    #[error("shelfmark must start with the `SA, ` designation")]
    MissingPrefix,
    #[error("shelfmark name is empty")]
    EmptyName,
}

impl Shelfmark {
    pub fn new(name: impl Into<String>) -> Result<Self, ShelfmarkError> {
        let name = name.into();
        if name.trim().is_empty() {
            return Err(ShelfmarkError::EmptyName);
        }
        Ok(Shelfmark { name })
    }

    /// The person name, surname first, exactly as recorded.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Stable directory-safe identifier: lowercase, runs of
    /// non-alphanumerics collapsed to single dashes.
    pub fn slug(&self) -> String {
        slugify(&self.to_string())
    }
}

/// Lowercase `s`, mapping every run of non-alphanumeric characters to `-`.
pub fn slugify(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut pending_dash = false;
    for c in s.chars() {
        if c.is_alphanumeric() {
            if pending_dash && !out.is_empty() {
                out.push('-');
            }
            pending_dash = false;
            out.extend(c.to_lowercase());
        } else {
            pending_dash = true;
        }
    }
    out
}

impl fmt::Display for Shelfmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{SHELFMARK_PREFIX}, {}", self.name)
    }
}

impl FromStr for Shelfmark {
    type Err = ShelfmarkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_shelfmark(s)
    }
}

/// Parse `SA, <nonempty name>`, preserving the name verbatim.
pub fn parse_shelfmark(s: &str) -> Result<Shelfmark, ShelfmarkError> {
    let rest = s.strip_prefix("SA, ").ok_or(ShelfmarkError::MissingPrefix)?;
    Shelfmark::new(rest)
}
