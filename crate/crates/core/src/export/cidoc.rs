//! Event-centric RDF export in the CIDOC-CRM idiom.
//!
//! Every document gets an event node: the event carries the agent
//! (`P14_carried_out_by`), the time span from the date expression, and the
//! place (`P7_took_place_at`); the document links back to its event. Which
//! event class a category maps to is an [`EventMapping`] decision with
//! defaults in `docs/mappings.md`.

use super::edm::push_agent_triples;
use super::vocab::{xsd_date, CRM, RDFS};
use super::{agent_fields, require_accepted, ExportError, GraphTriple, IriPolicy, Object};
use crate::ingest::UnitWorkbook;
use crate::model::{parse_date_expression, Category, DateKind};
use crate::sec::{SecCatalog, SecId, SecKind};
use crate::semantic::ValidationReport;

/// How one category exports: the event class and the predicate linking the
/// document to its event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryEvent {
    pub event_class: String,
    pub document_link: String,
}

/// Category-to-event table, overridable per project.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventMapping {
    entries: [CategoryEvent; 9],
}

impl EventMapping {
    pub fn for_category(&self, category: Category) -> &CategoryEvent {
        &self.entries[(category.code() - 1) as usize]
    }

    pub fn set(&mut self, category: Category, entry: CategoryEvent) {
        self.entries[(category.code() - 1) as usize] = entry;
    }
}

impl Default for EventMapping {
    fn default() -> Self {
        let creation = || CategoryEvent {
            event_class: format!("{CRM}E65_Creation"),
            document_link: format!("{CRM}P94i_was_created_by"),
        };
        let issuing = || CategoryEvent {
            event_class: format!("{CRM}E7_Activity"),
            document_link: format!("{CRM}P12i_was_present_at"),
        };
        let production = || CategoryEvent {
            event_class: format!("{CRM}E12_Production"),
            document_link: format!("{CRM}P108i_was_produced_by"),
        };
        EventMapping {
            entries: [
                creation(),   // 1 portraits, images, drawings
                creation(),   // 2 outgoing correspondence
                creation(),   // 3 creative works
                issuing(),    // 4 personal materials
                issuing(),    // 5 historical materials, diplomas
                production(), // 6 printed materials
                creation(),   // 7 incoming correspondence
                creation(),   // 8 foreign materials
                creation(),   // 9 library materials
            ],
        }
    }
}

fn format_day((year, month, day): (u16, u8, u8)) -> String {
    format!("{year:04}-{month:02}-{day:02}")
}

/// Export with the default event mapping.
pub fn export_cidoc(
    workbook: &UnitWorkbook,
    catalog: &SecCatalog,
    policy: &IriPolicy,
    report: &ValidationReport,
) -> Result<Vec<GraphTriple>, ExportError> {
    export_cidoc_with(workbook, catalog, policy, report, &EventMapping::default())
}

/// Export one accepted unit as event-centric triples.
pub fn export_cidoc_with(
    workbook: &UnitWorkbook,
    catalog: &SecCatalog,
    policy: &IriPolicy,
    report: &ValidationReport,
    mapping: &EventMapping,
) -> Result<Vec<GraphTriple>, ExportError> {
    require_accepted(workbook, report)?;
    let rdf_type = super::vocab::rdf_type();
    let mut triples = Vec::new();

    for record in &workbook.documents {
        let Some(doc_no) = record.doc_no() else { continue };
        let doc_iri = policy.document(&workbook.unit_id, &doc_no.to_string());
        let event_iri = policy.event(&workbook.unit_id, &doc_no.to_string());
        let category_event = mapping.for_category(doc_no.category);

        triples.push(GraphTriple::new(&doc_iri, &rdf_type, Object::iri(format!("{CRM}E31_Document"))));
        let title = record.get("title");
        if !title.is_empty() {
            triples.push(GraphTriple::new(&doc_iri, format!("{RDFS}label"), Object::plain(title)));
        }
        triples.push(GraphTriple::new(&event_iri, &rdf_type, Object::iri(category_event.event_class.clone())));
        triples.push(GraphTriple::new(&doc_iri, &category_event.document_link, Object::iri(&event_iri)));

        if let Some((_, sec_field)) = agent_fields(doc_no.category) {
            if let Ok(id) = record.get(sec_field).parse::<SecId>() {
                if let Some(entry) = catalog.resolve_ref(id) {
                    let agent_iri = policy.agent(&id.to_string());
                    triples.push(GraphTriple::new(
                        &event_iri,
                        format!("{CRM}P14_carried_out_by"),
                        Object::iri(&agent_iri),
                    ));
                    push_agent_triples(
                        &mut triples,
                        &agent_iri,
                        entry,
                        format!("{CRM}E21_Person"),
                        &format!("{RDFS}label"),
                    );
                }
            }
        }

        if let Ok(date) = parse_date_expression(record.get("date")) {
            let timespan_iri = policy.timespan(&workbook.unit_id, &doc_no.to_string());
            triples.push(GraphTriple::new(&event_iri, format!("{CRM}P4_has_time-span"), Object::iri(&timespan_iri)));
            triples.push(GraphTriple::new(&timespan_iri, &rdf_type, Object::iri(format!("{CRM}E52_Time-Span"))));
            triples.push(GraphTriple::new(
                &timespan_iri,
                format!("{CRM}P82a_begin_of_the_begin"),
                Object::typed(format_day(date.start.lower_bound()), &xsd_date()),
            ));
            let end = match date.kind {
                DateKind::Single => Some(date.start.upper_bound()),
                DateKind::Range => date.end.map(|e| e.upper_bound()),
                DateKind::OpenRange => None,
            };
            if let Some(end) = end {
                triples.push(GraphTriple::new(
                    &timespan_iri,
                    format!("{CRM}P82b_end_of_the_end"),
                    Object::typed(format_day(end), &xsd_date()),
                ));
            }
        }

        if let Ok(id) = record.get("place_sec").parse::<SecId>() {
            if id.kind == SecKind::Place {
                if let Some(entry) = catalog.resolve_ref(id) {
                    let place_iri = policy.place(&id.to_string());
                    triples.push(GraphTriple::new(&event_iri, format!("{CRM}P7_took_place_at"), Object::iri(&place_iri)));
                    push_agent_triples(
                        &mut triples,
                        &place_iri,
                        entry,
                        format!("{CRM}E53_Place"),
                        &format!("{RDFS}label"),
                    );
                }
            }
        }
    }

    triples.sort();
    triples.dedup();
    Ok(triples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{DocumentRecord, SchemaConfig, Shelfmark};
    use crate::sec::{SecPersonEntry, SecPlaceEntry};
    use crate::semantic::validate_unit;

    fn fixture_with(rows: Vec<DocumentRecord>) -> (UnitWorkbook, SecCatalog, ValidationReport) {
        let schema = SchemaConfig::default();
        let mut catalog = SecCatalog::new();
        catalog.insert_person(SecPersonEntry {
            id: "P-000001".into(),
            preferred_name: "Keppler, Johannes".into(),
            ..Default::default()
        });
        catalog.insert_place(SecPlaceEntry {
            id: "L-000001".into(),
            preferred_name: "Linz".into(),
            external_urls: vec!["https://www.geonames.org/2772400/".into()],
            ..Default::default()
        });
        let shelfmark: Shelfmark = "SA, Keppler, Johannes".parse().unwrap();
        let mut workbook = UnitWorkbook::new(&shelfmark, &schema);
        workbook.metric.title = "Letters".into();
        workbook.documents = rows;
        let report = validate_unit(&mut workbook, &catalog, &schema);
        assert!(report.accepted(), "{:?}", report.findings);
        (workbook, catalog, report)
    }

    fn find<'a>(triples: &'a [GraphTriple], predicate: &str) -> Vec<&'a GraphTriple> {
        triples.iter().filter(|t| t.predicate == predicate).collect()
    }

    #[test]
    fn letter_event_with_agent_and_year_interval() {
        let (workbook, catalog, report) = fixture_with(vec![DocumentRecord::new()
            .with("doc_no", "2.1")
            .with("title", "Letter")
            .with("date", "1820")
            .with("sender_sec", "P-000001")]);
        let triples =
            export_cidoc(&workbook, &catalog, &IriPolicy::default(), &report).unwrap();

        let agents = find(&triples, &format!("{CRM}P14_carried_out_by"));
        assert_eq!(agents.len(), 1);
        assert!(matches!(&agents[0].object, Object::Iri(iri) if iri.contains("P-000001")));

        let begins = find(&triples, &format!("{CRM}P82a_begin_of_the_begin"));
        assert_eq!(begins[0].object, Object::typed("1820-01-01", &xsd_date()));
        let ends = find(&triples, &format!("{CRM}P82b_end_of_the_end"));
        assert_eq!(ends[0].object, Object::typed("1820-12-31", &xsd_date()));
    }

    #[test]
    fn incoming_letter_agent_is_the_sender() {
        let (workbook, catalog, report) = fixture_with(vec![DocumentRecord::new()
            .with("doc_no", "7.1")
            .with("title", "Letter from T. Harriot")
            .with("sender_sec", "P-000001")]);
        let triples = export_cidoc(&workbook, &catalog, &IriPolicy::default(), &report).unwrap();
        let agents = find(&triples, &format!("{CRM}P14_carried_out_by"));
        assert_eq!(agents.len(), 1);
        assert!(matches!(&agents[0].object, Object::Iri(iri) if iri.contains("P-000001")));
    }

    #[test]
    fn undated_document_has_no_timespan() {
        let (workbook, catalog, report) = fixture_with(vec![DocumentRecord::new()
            .with("doc_no", "3.1")
            .with("title", "Poem")]);
        let triples = export_cidoc(&workbook, &catalog, &IriPolicy::default(), &report).unwrap();
        assert!(find(&triples, &format!("{CRM}P4_has_time-span")).is_empty());
        // the event node itself is still there
        assert_eq!(find(&triples, &format!("{CRM}P94i_was_created_by")).len(), 1);
    }

    #[test]
    fn place_reference_becomes_took_place_at() {
        let (workbook, catalog, report) = fixture_with(vec![DocumentRecord::new()
            .with("doc_no", "2.1")
            .with("title", "Letter")
            .with("place_sec", "L-000001")]);
        let triples = export_cidoc(&workbook, &catalog, &IriPolicy::default(), &report).unwrap();
        let places = find(&triples, &format!("{CRM}P7_took_place_at"));
        assert_eq!(places.len(), 1);
        assert!(matches!(&places[0].object, Object::Iri(iri) if iri.contains("L-000001")));
    }

    #[test]
    fn category_mapping_defaults() {
        let mapping = EventMapping::default();
        assert!(mapping.for_category(Category::CreativeWorks).event_class.ends_with("E65_Creation"));
        assert!(mapping.for_category(Category::PersonalMaterials).event_class.ends_with("E7_Activity"));
        assert!(mapping.for_category(Category::PrintedMaterials).event_class.ends_with("E12_Production"));
        assert!(mapping.for_category(Category::LibraryMaterials).event_class.ends_with("E65_Creation"));
    }
}
