//! Deterministic Turtle serialization.
//!
//! Triples are sorted and deduplicated, vocabulary terms are compressed to
//! prefixed names, and everything else is written in full `<...>` form, so
//! the same triple set always produces the same bytes.

use super::vocab::{PREFIXES, RDF, XSD};
use super::{GraphTriple, Object};
use std::collections::BTreeSet;

fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            other => out.push(other),
        }
    }
    out
}

fn local_name_safe(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn render_iri(iri: &str) -> String {
    for (prefix, ns) in PREFIXES {
        if let Some(local) = iri.strip_prefix(ns) {
            if local_name_safe(local) {
                return format!("{prefix}:{local}");
            }
        }
    }
    format!("<{iri}>")
}

fn render_object(object: &Object) -> String {
    match object {
        Object::Iri(iri) => render_iri(iri),
        Object::Literal { lexical, datatype, lang } => {
            let quoted = format!("\"{}\"", escape_literal(lexical));
            if let Some(lang) = lang {
                format!("{quoted}@{lang}")
            } else if let Some(dt) = datatype {
                if dt == &format!("{XSD}string") {
                    quoted
                } else {
                    format!("{quoted}^^{}", render_iri(dt))
                }
            } else {
                quoted
            }
        }
    }
}

fn used_namespaces(triples: &[GraphTriple]) -> BTreeSet<&'static str> {
    let mut used: BTreeSet<&'static str> = BTreeSet::new();
    // rdf and xsd are the baseline for typing
    used.insert("rdf");
    used.insert("xsd");
    let mut note = |iri: &str| {
        for (prefix, ns) in PREFIXES {
            if iri.starts_with(ns) {
                used.insert(prefix);
            }
        }
    };
    for t in triples {
        note(&t.subject);
        note(&t.predicate);
        match &t.object {
            Object::Iri(iri) => note(iri),
            Object::Literal { datatype, .. } => {
                if let Some(dt) = datatype {
                    note(dt);
                }
            }
        }
    }
    used
}

/// Serialize triples as Turtle: sorted, deduplicated, prefixed.
pub fn serialize_turtle(triples: &[GraphTriple]) -> String {
    let mut sorted: Vec<&GraphTriple> = triples.iter().collect();
    sorted.sort();
    sorted.dedup();

    let mut out = String::new();
    for prefix in used_namespaces(triples) {
        let ns = PREFIXES.iter().find(|(p, _)| *p == prefix).map(|(_, ns)| *ns).unwrap_or(RDF);
        out.push_str(&format!("@prefix {prefix}: <{ns}> .\n"));
    }
    if sorted.is_empty() {
        return out;
    }
    out.push('\n');
    for t in sorted {
        out.push_str(&format!(
            "{} {} {} .\n",
            render_iri(&t.subject),
            render_iri(&t.predicate),
            render_object(&t.object)
        ));
    }
    out
}
