//! The field schema driving workbook columns and validation.
//!
//! A [`SchemaConfig`] lists every description field, whether it is mandatory,
//! which categories it applies to, and how its raw text is typed. The
//! built-in default covers the standard description fields; projects extend
//! it through a `schema.toml` file as new columns become necessary.

use super::Category;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use thiserror::Error;

/// How a field's raw cell text is parsed during validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueKind {
    Text,
    DocNumber,
    DateExpression,
    SecPersonRef,
    SecPlaceRef,
    CardRange,
    Url,
    Integer,
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ValueKind::Text => "text",
            ValueKind::DocNumber => "doc-number",
            ValueKind::DateExpression => "date-expression",
            ValueKind::SecPersonRef => "sec-person-ref",
            ValueKind::SecPlaceRef => "sec-place-ref",
            ValueKind::CardRange => "card-range",
            ValueKind::Url => "url",
            ValueKind::Integer => "integer",
        };
        f.write_str(s)
    }
}

/// One description field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub id: String,
    pub label: String,
    pub mandatory: bool,
    /// Categories this field applies to; for all other categories the field
    /// is blocked and must stay empty.
    pub applicability: BTreeSet<Category>,
    pub value_kind: ValueKind,
}

impl FieldSpec {
    fn new(
        id: &str,
        label: &str,
        mandatory: bool,
        categories: &[u8],
        value_kind: ValueKind,
    ) -> FieldSpec {
        FieldSpec {
            id: id.to_string(),
            label: label.to_string(),
            mandatory,
            applicability: categories
                .iter()
                .map(|c| Category::from_code(*c).expect("built-in category code"))
                .collect(),
            value_kind,
        }
    }

    pub fn applies_to(&self, category: Category) -> bool {
        self.applicability.contains(&category)
    }
}

/// Whether document sequences run per category or across the whole unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequencingMode {
    #[default]
    PerCategory,
    PerUnit,
}

impl FromStr for SequencingMode {
    type Err = SchemaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "per-category" => Ok(SequencingMode::PerCategory),
            "per-unit" => Ok(SequencingMode::PerUnit),
            other => Err(SchemaError::InvalidValue(format!("sequencing_mode: {other}"))),
        }
    }
}

/// The active field schema.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaConfig {
    pub version: u32,
    pub sequencing_mode: SequencingMode,
    pub fields: Vec<FieldSpec>,
}

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("duplicate field id `{0}`")]
    DuplicateFieldId(String),
    #[error("field `{0}` applies to no category")]
    EmptyApplicability(String),
    #[error("built-in field `{0}` is missing")]
    MissingBuiltin(&'static str),
    #[error("invalid value: {0}")]
    InvalidValue(String),
    #[error("failed to read schema file: {0}")]
    Io(#[from] std::io::Error),
    #[error("schema file is not valid TOML: {0}")]
    Toml(#[from] toml::de::Error),
}

/// Field ids that every schema must carry.
const BUILTIN_IDS: &[&str] = &[
    "doc_no",
    "title",
    "date",
    "date_remarks",
    "sender",
    "sender_sec",
    "recipient",
    "recipient_sec",
    "issuer",
    "issuer_sec",
    "author",
    "author_sec",
    "cards",
];

impl Default for SchemaConfig {
    fn default() -> Self {
        SchemaConfig::builtin()
    }
}

impl SchemaConfig {
    /// The built-in field set, version 1.
    pub fn builtin() -> SchemaConfig {
        const ALL: &[u8] = &[1, 2, 3, 4, 5, 6, 7, 8, 9];
        const CORRESPONDENCE: &[u8] = &[2, 7];
        const OFFICIAL: &[u8] = &[4, 5];
        const CREATIVE: &[u8] = &[3];
        let fields = vec![
            FieldSpec::new("doc_no", "Document number", true, ALL, ValueKind::DocNumber),
            FieldSpec::new("title", "What is it / document title", true, ALL, ValueKind::Text),
            FieldSpec::new("date", "Date", false, ALL, ValueKind::DateExpression),
            FieldSpec::new("date_remarks", "Date remarks", false, ALL, ValueKind::Text),
            FieldSpec::new("sender", "Sender", false, CORRESPONDENCE, ValueKind::Text),
            FieldSpec::new("sender_sec", "Sender (SEC id)", false, CORRESPONDENCE, ValueKind::SecPersonRef),
            FieldSpec::new("recipient", "Recipient", false, CORRESPONDENCE, ValueKind::Text),
            FieldSpec::new("recipient_sec", "Recipient (SEC id)", false, CORRESPONDENCE, ValueKind::SecPersonRef),
            FieldSpec::new("issuer", "Issuer", false, OFFICIAL, ValueKind::Text),
            FieldSpec::new("issuer_sec", "Issuer (SEC id)", false, OFFICIAL, ValueKind::SecPersonRef),
            FieldSpec::new("author", "Author", false, CREATIVE, ValueKind::Text),
            FieldSpec::new("author_sec", "Author (SEC id)", false, CREATIVE, ValueKind::SecPersonRef),
            FieldSpec::new("place", "Place", false, ALL, ValueKind::Text),
            FieldSpec::new("place_sec", "Place (SEC id)", false, ALL, ValueKind::SecPlaceRef),
            FieldSpec::new("cards", "Card numbers", false, ALL, ValueKind::CardRange),
        ];
        let schema =
            SchemaConfig { version: 1, sequencing_mode: SequencingMode::default(), fields };
        schema.validate().expect("built-in schema is valid");
        schema
    }

    /// Check id uniqueness, non-empty applicability, and builtin coverage.
    pub fn validate(&self) -> Result<(), SchemaError> {
        let mut seen = BTreeSet::new();
        for field in &self.fields {
            if !seen.insert(field.id.as_str()) {
                return Err(SchemaError::DuplicateFieldId(field.id.clone()));
            }
            if field.applicability.is_empty() {
                return Err(SchemaError::EmptyApplicability(field.id.clone()));
            }
        }
        for id in BUILTIN_IDS {
            if !seen.contains(id) {
                return Err(SchemaError::MissingBuiltin(id));
            }
        }
        Ok(())
    }

    pub fn field(&self, id: &str) -> Option<&FieldSpec> {
        self.fields.iter().find(|f| f.id == id)
    }

    pub fn has_field(&self, id: &str) -> bool {
        self.field(id).is_some()
    }

    pub fn field_ids(&self) -> impl Iterator<Item = &str> {
        self.fields.iter().map(|f| f.id.as_str())
    }

    /// Load a schema from a TOML file.
    pub fn load(path: &Path) -> Result<SchemaConfig, SchemaError> {
        let text = std::fs::read_to_string(path)?;
        SchemaConfig::from_toml_str(&text)
    }

    /// Parse the `schema.toml` key set.
    pub fn from_toml_str(text: &str) -> Result<SchemaConfig, SchemaError> {
        let file: SchemaFile = toml::from_str(text)?;
        let mut fields = Vec::with_capacity(file.field.len());
        for f in file.field {
            let mut applicability = BTreeSet::new();
            for code in f.categories {
                let cat = Category::from_code(code)
                    .ok_or_else(|| SchemaError::InvalidValue(format!("category code {code}")))?;
                applicability.insert(cat);
            }
            fields.push(FieldSpec {
                id: f.id,
                label: f.label,
                mandatory: f.mandatory,
                applicability,
                value_kind: f.kind,
            });
        }
        let schema = SchemaConfig {
            version: file.version,
            sequencing_mode: file.sequencing_mode.parse()?,
            fields,
        };
        schema.validate()?;
        Ok(schema)
    }

    /// Render the schema as a TOML document (inverse of [`from_toml_str`]).
    ///
    /// [`from_toml_str`]: SchemaConfig::from_toml_str
    pub fn to_toml_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("version = {}\n", self.version));
        let mode = match self.sequencing_mode {
            SequencingMode::PerCategory => "per-category",
            SequencingMode::PerUnit => "per-unit",
        };
        out.push_str(&format!("sequencing_mode = \"{mode}\"\n"));
        for f in &self.fields {
            out.push_str("\n[[field]]\n");
            out.push_str(&format!("id = {}\n", toml_quote(&f.id)));
            out.push_str(&format!("label = {}\n", toml_quote(&f.label)));
            out.push_str(&format!("mandatory = {}\n", f.mandatory));
            let cats: Vec<String> =
                f.applicability.iter().map(|c| c.code().to_string()).collect();
            out.push_str(&format!("categories = [{}]\n", cats.join(", ")));
            out.push_str(&format!("kind = \"{}\"\n", f.value_kind));
        }
        out
    }
}

fn toml_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

#[derive(Deserialize)]
struct SchemaFile {
    version: u32,
    #[serde(default = "default_mode")]
    sequencing_mode: String,
    #[serde(default)]
    field: Vec<SchemaFileField>,
}

fn default_mode() -> String {
    "per-category".to_string()
}

#[derive(Deserialize)]
struct SchemaFileField {
    id: String,
    label: String,
    #[serde(default)]
    mandatory: bool,
    categories: Vec<u8>,
    kind: ValueKind,
}

/// Field ids applicable to a category under `schema`.
pub fn applicable_fields(category: Category, schema: &SchemaConfig) -> BTreeSet<String> {
    schema
        .fields
        .iter()
        .filter(|f| f.applies_to(category))
        .map(|f| f.id.clone())
        .collect()
}

/// Field ids blocked for a category: the complement of [`applicable_fields`].
pub fn blocked_fields(category: Category, schema: &SchemaConfig) -> BTreeSet<String> {
    schema
        .fields
        .iter()
        .filter(|f| !f.applies_to(category))
        .map(|f| f.id.clone())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn portraits_block_all_agent_fields() {
        let schema = SchemaConfig::default();
        let blocked = blocked_fields(Category::PortraitsImagesDrawings, &schema);
        for id in ["sender", "recipient", "issuer", "author"] {
            assert!(blocked.contains(id), "{id} should be blocked for category 1");
        }
        assert!(!blocked.contains("title"));
        assert!(!blocked.contains("doc_no"));
    }

    #[test]
    fn correspondence_fields_for_category_2() {
        let schema = SchemaConfig::default();
        let applicable = applicable_fields(Category::OutgoingCorrespondence, &schema);
        assert!(applicable.contains("sender"));
        assert!(applicable.contains("recipient"));
        assert!(!applicable.contains("issuer"));
        assert!(!applicable.contains("author"));
    }

    #[test]
    fn author_only_for_creative_works() {
        let schema = SchemaConfig::default();
        let applicable = applicable_fields(Category::CreativeWorks, &schema);
        assert!(applicable.contains("author"));
        assert!(!applicable.contains("sender"));
        assert!(!applicable.contains("recipient"));
        assert!(!applicable.contains("issuer"));
    }

    #[test]
    fn applicable_and_blocked_partition_the_schema() {
        let schema = SchemaConfig::default();
        let all: BTreeSet<String> = schema.field_ids().map(str::to_string).collect();
        for category in Category::ALL {
            let applicable = applicable_fields(category, &schema);
            let blocked = blocked_fields(category, &schema);
            assert!(applicable.is_disjoint(&blocked));
            let union: BTreeSet<String> = applicable.union(&blocked).cloned().collect();
            assert_eq!(union, all);
        }
    }

    #[test]
    fn toml_round_trip() {
        let schema = SchemaConfig::default();
        let text = schema.to_toml_string();
        let parsed = SchemaConfig::from_toml_str(&text).unwrap();
        assert_eq!(parsed, schema);
    }

    #[test]
    fn extension_field_parses() {
        let mut text = SchemaConfig::default().to_toml_string();
        text = text.replace("version = 1", "version = 2");
        text.push_str("\n[[field]]\nid = \"language\"\nlabel = \"Language\"\ncategories = [1,2,3,4,5,6,7,8,9]\nkind = \"text\"\n");
        let schema = SchemaConfig::from_toml_str(&text).unwrap();
        assert_eq!(schema.version, 2);
        let field = schema.field("language").unwrap();
        assert!(!field.mandatory);
        assert_eq!(field.value_kind, ValueKind::Text);
        assert_eq!(field.applicability.len(), 9);
    }

    #[test]
    fn duplicate_ids_rejected() {
        let mut text = SchemaConfig::default().to_toml_string();
        text.push_str("\n[[field]]\nid = \"title\"\nlabel = \"Again\"\ncategories = [1]\nkind = \"text\"\n");
        assert!(matches!(
            SchemaConfig::from_toml_str(&text),
            Err(SchemaError::DuplicateFieldId(id)) if id == "title"
        ));
    }

    #[test]
    fn missing_builtin_rejected() {
        let text = "version = 1\n\n[[field]]\nid = \"doc_no\"\nlabel = \"N\"\nmandatory = true\ncategories = [1]\nkind = \"doc-number\"\n";
        assert!(matches!(SchemaConfig::from_toml_str(text), Err(SchemaError::MissingBuiltin(_))));
    }
}
