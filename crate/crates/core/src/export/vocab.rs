//! RDF vocabulary namespaces used by the exporters.

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const SKOS: &str = "http://www.w3.org/2004/02/skos/core#";
pub const DC: &str = "http://purl.org/dc/elements/1.1/";
pub const DCTERMS: &str = "http://purl.org/dc/terms/";
pub const EDM: &str = "http://www.europeana.eu/schemas/edm/";
pub const ORE: &str = "http://www.openarchives.org/ore/terms/";
pub const CRM: &str = "http://www.cidoc-crm.org/cidoc-crm/";

/// Prefix table for Turtle output, sorted by prefix.
pub const PREFIXES: &[(&str, &str)] = &[
    ("crm", CRM),
    ("dc", DC),
    ("dcterms", DCTERMS),
    ("edm", EDM),
    ("ore", ORE),
    ("owl", OWL),
    ("rdf", RDF),
    ("rdfs", RDFS),
    ("skos", SKOS),
    ("xsd", XSD),
];

pub fn rdf_type() -> String {
    format!("{RDF}type")
}

pub fn xsd_date() -> String {
    format!("{XSD}date")
}
