//! Europeana Data Model export.
//!
//! Per document: one `edm:ProvidedCHO` carrying the descriptive properties,
//! one `edm:WebResource` per scan bound to the document's cards, and exactly
//! one `ore:Aggregation` tying the two sides together. Documents without
//! scans keep their CHO but get no aggregation.

use super::vocab::{DC, EDM, ORE, OWL, SKOS};
use super::{agent_fields, require_accepted, ExportError, GraphTriple, IriPolicy, Object};
use crate::ingest::UnitWorkbook;
use crate::model::DocumentRecord;
use crate::scanmap::{card_set, parse_card_range};
use crate::sec::{SecCatalog, SecEntryRef, SecId};
use crate::semantic::ValidationReport;
use std::collections::BTreeSet;

pub(super) fn push_agent_triples(
    triples: &mut Vec<GraphTriple>,
    iri: &str,
    entry: SecEntryRef<'_>,
    class_iri: String,
    label_predicate: &str,
) {
    triples.push(GraphTriple::new(iri, super::vocab::rdf_type(), Object::iri(class_iri)));
    if !entry.preferred_name().is_empty() {
        triples.push(GraphTriple::new(iri, label_predicate, Object::plain(entry.preferred_name())));
    }
    for url in entry.external_urls() {
        triples.push(GraphTriple::new(iri, format!("{OWL}sameAs"), Object::iri(url.clone())));
    }
}

/// Scan files bound to the document's declared cards, in map order.
pub(super) fn document_scans<'a>(
    workbook: &'a UnitWorkbook,
    record: &DocumentRecord,
) -> Vec<&'a str> {
    let Some(map) = workbook.map.as_ref() else {
        return Vec::new();
    };
    let raw = record.get("cards");
    let cards: BTreeSet<u32> = match parse_card_range(raw) {
        Ok(ranges) => card_set(&ranges),
        Err(_) => return Vec::new(),
    };
    map.iter()
        .filter(|b| cards.contains(&b.card_no) && !b.scan_file.is_empty())
        .map(|b| b.scan_file.as_str())
        .collect()
}

/// Export one accepted unit as EDM triples, sorted and deduplicated.
pub fn export_edm(
    workbook: &UnitWorkbook,
    catalog: &SecCatalog,
    policy: &IriPolicy,
    report: &ValidationReport,
) -> Result<Vec<GraphTriple>, ExportError> {
    require_accepted(workbook, report)?;
    let rdf_type = super::vocab::rdf_type();
    let mut triples = Vec::new();

    for record in &workbook.documents {
        let Some(doc_no) = record.doc_no() else { continue };
        let doc_iri = policy.document(&workbook.unit_id, &doc_no.to_string());
        triples.push(GraphTriple::new(&doc_iri, &rdf_type, Object::iri(format!("{EDM}ProvidedCHO"))));
        triples.push(GraphTriple::new(&doc_iri, format!("{DC}identifier"), Object::plain(doc_no.to_string())));

        let title = record.get("title");
        if !title.is_empty() {
            triples.push(GraphTriple::new(&doc_iri, format!("{DC}title"), Object::plain(title)));
        }
        let date = record.get("date");
        if !date.is_empty() {
            triples.push(GraphTriple::new(&doc_iri, format!("{DC}date"), Object::plain(date)));
        }

        if let Some((text_field, sec_field)) = agent_fields(doc_no.category) {
            let sec_raw = record.get(sec_field);
            if let Ok(id) = sec_raw.parse::<SecId>() {
                if let Some(entry) = catalog.resolve_ref(id) {
                    let agent_iri = policy.agent(&id.to_string());
                    triples.push(GraphTriple::new(&doc_iri, format!("{DC}creator"), Object::iri(&agent_iri)));
                    push_agent_triples(
                        &mut triples,
                        &agent_iri,
                        entry,
                        format!("{EDM}Agent"),
                        &format!("{SKOS}prefLabel"),
                    );
                }
            } else if !record.get(text_field).is_empty() {
                triples.push(GraphTriple::new(
                    &doc_iri,
                    format!("{DC}creator"),
                    Object::plain(record.get(text_field)),
                ));
            }
        }

        let scans = document_scans(workbook, record);
        if scans.is_empty() {
            log::warn!(
                "unit {} document {}: no scans bound, aggregation omitted",
                workbook.unit_id,
                doc_no
            );
            continue;
        }
        let aggregation_iri = policy.aggregation(&workbook.unit_id, &doc_no.to_string());
        triples.push(GraphTriple::new(&aggregation_iri, &rdf_type, Object::iri(format!("{ORE}Aggregation"))));
        triples.push(GraphTriple::new(&aggregation_iri, format!("{EDM}aggregatedCHO"), Object::iri(&doc_iri)));
        for scan in scans {
            let scan_iri = policy.scan(&workbook.unit_id, scan);
            triples.push(GraphTriple::new(&scan_iri, &rdf_type, Object::iri(format!("{EDM}WebResource"))));
            triples.push(GraphTriple::new(&aggregation_iri, format!("{EDM}hasView"), Object::iri(&scan_iri)));
        }
    }

    triples.sort();
    triples.dedup();
    Ok(triples)
}
