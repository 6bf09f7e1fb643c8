//! EAD finding-aid export.
//!
//! One XML document for any number of accepted units: a collection-level
//! description, one `c01` component per unit (unitid = shelfmark), and one
//! nested `c02` per document with its date, genre term, and authority-backed
//! person/place names. Element order is fixed (unit order, then document
//! number order), so equal input yields byte-equal output.

use super::{agent_fields, ExportError};
use crate::ingest::UnitWorkbook;
use crate::model::{parse_date_expression, DateKind, DocumentRecord};
use crate::sec::{authority_of, SecCatalog, SecId, SecKind};
use crate::semantic::ValidationReport;

/// Collection-level description for the finding aid header.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CollectionMeta {
    pub title: String,
    pub id: String,
    pub repository: String,
}

fn escape_xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            other => out.push(other),
        }
    }
    out
}

struct Xml {
    out: String,
    depth: usize,
}

impl Xml {
    fn new() -> Xml {
        Xml { out: String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"), depth: 0 }
    }

    fn indent(&mut self) {
        for _ in 0..self.depth {
            self.out.push_str("  ");
        }
    }

    fn open(&mut self, tag: &str) {
        self.open_attrs(tag, &[]);
    }

    fn open_attrs(&mut self, tag: &str, attrs: &[(&str, &str)]) {
        self.indent();
        self.out.push('<');
        self.out.push_str(tag);
        for (name, value) in attrs {
            self.out.push_str(&format!(" {name}=\"{}\"", escape_xml(value)));
        }
        self.out.push_str(">\n");
        self.depth += 1;
    }

    fn close(&mut self, tag: &str) {
        self.depth -= 1;
        self.indent();
        self.out.push_str(&format!("</{tag}>\n"));
    }

    fn leaf(&mut self, tag: &str, attrs: &[(&str, &str)], text: &str) {
        self.indent();
        self.out.push('<');
        self.out.push_str(tag);
        for (name, value) in attrs {
            self.out.push_str(&format!(" {name}=\"{}\"", escape_xml(value)));
        }
        self.out.push('>');
        self.out.push_str(&escape_xml(text));
        self.out.push_str(&format!("</{tag}>\n"));
    }
}

fn date_normal_attr(raw: &str) -> Option<String> {
    let date = parse_date_expression(raw).ok()?;
    let fmt = |(y, m, d): (u16, u8, u8)| format!("{y:04}-{m:02}-{d:02}");
    Some(match date.kind {
        DateKind::Single => format!("{}/{}", fmt(date.start.lower_bound()), fmt(date.start.upper_bound())),
        DateKind::Range => format!(
            "{}/{}",
            fmt(date.start.lower_bound()),
            fmt(date.end.expect("range end").upper_bound())
        ),
        DateKind::OpenRange => format!("{}/", fmt(date.start.lower_bound())),
    })
}

fn name_element(
    xml: &mut Xml,
    tag: &str,
    record: &DocumentRecord,
    text_field: &str,
    sec_field: &str,
    expected: SecKind,
    catalog: &SecCatalog,
) {
    let sec_raw = record.get(sec_field);
    if let Ok(id) = sec_raw.parse::<SecId>() {
        if id.kind == expected {
            if let Some(entry) = catalog.resolve_ref(id) {
                let authority_url = entry
                    .external_urls()
                    .iter()
                    .find(|u| authority_of(u).is_some());
                match authority_url {
                    Some(url) => {
                        let source = authority_of(url).expect("checked").tag();
                        xml.leaf(
                            tag,
                            &[("source", source), ("authfilenumber", url)],
                            entry.preferred_name(),
                        );
                    }
                    None => xml.leaf(tag, &[], entry.preferred_name()),
                }
                return;
            }
        }
    }
    let text = record.get(text_field);
    if !text.is_empty() {
        xml.leaf(tag, &[], text);
    }
}

/// Export accepted units as one EAD document.
pub fn export_ead(
    units: &[(&UnitWorkbook, &ValidationReport)],
    meta: &CollectionMeta,
    catalog: &SecCatalog,
) -> Result<String, ExportError> {
    if units.is_empty() {
        return Err(ExportError::EmptyInput);
    }
    for (workbook, report) in units {
        if !report.accepted() || report.subject != workbook.unit_id {
            return Err(ExportError::UnitNotAccepted(workbook.unit_id.clone()));
        }
    }

    let mut xml = Xml::new();
    xml.open("ead");
    xml.open("eadheader");
    xml.leaf("eadid", &[], if meta.id.is_empty() { "collection" } else { &meta.id });
    xml.open("filedesc");
    xml.open("titlestmt");
    xml.leaf("titleproper", &[], &meta.title);
    xml.close("titlestmt");
    xml.close("filedesc");
    xml.close("eadheader");

    xml.open_attrs("archdesc", &[("level", "collection")]);
    xml.open("did");
    xml.leaf("unittitle", &[], &meta.title);
    if !meta.repository.is_empty() {
        xml.leaf("repository", &[], &meta.repository);
    }
    xml.close("did");
    xml.open("dsc");

    for (workbook, _) in units {
        xml.open_attrs("c01", &[("level", "file")]);
        xml.open("did");
        xml.leaf("unitid", &[], &workbook.shelfmark);
        let unit_title = workbook
            .metric
            .parsed_shelfmark()
            .map(|s| s.name().to_string())
            .unwrap_or_else(|| workbook.shelfmark.clone());
        xml.leaf("unittitle", &[], &unit_title);
        xml.close("did");

        let mut ordered: Vec<&DocumentRecord> = workbook.documents.iter().collect();
        ordered.sort_by_key(|r| {
            r.doc_no().map(|d| (d.category.code(), d.sequence)).unwrap_or((u8::MAX, u32::MAX))
        });

        for record in ordered {
            xml.open_attrs("c02", &[("level", "item")]);
            xml.open("did");
            xml.leaf("unittitle", &[], record.get("title"));
            let date_raw = record.get("date");
            if !date_raw.is_empty() {
                match date_normal_attr(date_raw) {
                    Some(normal) => xml.leaf("unitdate", &[("normal", &normal)], date_raw),
                    None => xml.leaf("unitdate", &[], date_raw),
                }
            }
            xml.close("did");

            xml.open("controlaccess");
            if let Some(doc_no) = record.doc_no() {
                xml.leaf("genreform", &[], doc_no.category.label());
                if let Some((text_field, sec_field)) = agent_fields(doc_no.category) {
                    name_element(&mut xml, "persname", record, text_field, sec_field, SecKind::Person, catalog);
                }
            }
            name_element(&mut xml, "geogname", record, "place", "place_sec", SecKind::Place, catalog);
            xml.close("controlaccess");
            xml.close("c02");
        }
        xml.close("c01");
    }

    xml.close("dsc");
    xml.close("archdesc");
    xml.close("ead");
    Ok(xml.out)
}
