//! The nine-way document category scheme.
//!
//! Every described document is classified into exactly one category; the
//! category decides which description fields apply to it and supplies the
//! leading digit of the document number.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Document category, encoded as the digit 1-9 in document numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Category {
    PortraitsImagesDrawings = 1,
    OutgoingCorrespondence = 2,
    CreativeWorks = 3,
    PersonalMaterials = 4,
    HistoricalMaterials = 5,
    PrintedMaterials = 6,
    IncomingCorrespondence = 7,
    ForeignMaterials = 8,
    LibraryMaterials = 9,
}

impl Category {
    /// All nine categories in code order.
    pub const ALL: [Category; 9] = [
        Category::PortraitsImagesDrawings,
        Category::OutgoingCorrespondence,
        Category::CreativeWorks,
        Category::PersonalMaterials,
        Category::HistoricalMaterials,
        Category::PrintedMaterials,
        Category::IncomingCorrespondence,
        Category::ForeignMaterials,
        Category::LibraryMaterials,
    ];

    /// Numeric code, 1 through 9.
    pub fn code(self) -> u8 {
        self as u8
    }

    /// Catalog label shown to describers.
    pub fn label(self) -> &'static str {
        match self {
            Category::PortraitsImagesDrawings => "Portraits, images, and drawings",
            Category::OutgoingCorrespondence => "Outgoing correspondence",
            Category::CreativeWorks => "Creative works",
            Category::PersonalMaterials => "Personal materials",
            Category::HistoricalMaterials => "Historical materials, diplomas",
            Category::PrintedMaterials => "Printed materials and press clippings",
            Category::IncomingCorrespondence => "Incoming correspondence",
            Category::ForeignMaterials => "Foreign materials",
            Category::LibraryMaterials => "Library materials",
        }
    }

    /// Look a category up by its numeric code.
    pub fn from_code(code: u8) -> Option<Category> {
        Category::ALL.get(code.checked_sub(1)? as usize).copied()
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

impl TryFrom<u8> for Category {
    type Error = String;

    fn try_from(code: u8) -> Result<Self, Self::Error> {
        Category::from_code(code).ok_or_else(|| format!("category code out of range: {code}"))
    }
}

impl From<Category> for u8 {
    fn from(c: Category) -> u8 {
        c.code()
    }
}
