//! Shared generators for the integration and acceptance suites.
//!
//! All generation is seeded, so every run sees the same corpus.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use scriptorium::ingest::UnitWorkbook;
use scriptorium::model::{DocumentRecord, MetricRecord, SchemaConfig, Shelfmark};
use scriptorium::scanmap::ScanBinding;
use scriptorium::sec::{SecCatalog, SecPersonEntry, SecPlaceEntry};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A printable cell value that stresses CSV quoting now and then.
pub fn cell_text(rng: &mut ChaCha8Rng) -> String {
    const PLAIN: &[&str] = &[
        "Letter to T. Harriot",
        "Draft with notes",
        "Poem, untitled",
        "Portrait in ink",
        "Certificate of appointment",
    ];
    match rng.gen_range(0..10) {
        0 => format!("with, commas, {}", rng.gen_range(0..100)),
        1 => format!("a \"quoted\" value {}", rng.gen_range(0..100)),
        2 => format!("line\nbreak {}", rng.gen_range(0..100)),
        3 => format!("ünïcode été {}", rng.gen_range(0..100)),
        _ => format!("{} no. {}", PLAIN[rng.gen_range(0..PLAIN.len())], rng.gen_range(0..1000)),
    }
}

/// A clean row for the given category with an in-sequence number.
pub fn clean_row(rng: &mut ChaCha8Rng, category: u8, sequence: u32) -> DocumentRecord {
    let mut record = DocumentRecord::new()
        .with("doc_no", &format!("{category}.{sequence}"))
        .with("title", &cell_text(rng));
    if rng.gen_bool(0.6) {
        let year = rng.gen_range(1500..1950);
        let date = match rng.gen_range(0..5) {
            0 => format!("{year}"),
            1 => format!("{year}-{:02}", rng.gen_range(1..=12)),
            2 => format!("{year}-{:02}-{:02}", rng.gen_range(1..=12), rng.gen_range(1..=28)),
            3 => format!("{year}/{}", year + rng.gen_range(1..20)),
            _ => format!("~{year}"),
        };
        record.set("date", date);
    }
    match category {
        2 | 7 => record.set("sender", cell_text(rng)),
        3 => record.set("author", cell_text(rng)),
        4 | 5 => record.set("issuer", cell_text(rng)),
        _ => {}
    }
    record
}

/// A generated workbook: valid shape, not necessarily clean content.
pub fn generated_workbook(rng: &mut ChaCha8Rng, schema: &SchemaConfig, index: usize) -> UnitWorkbook {
    let shelfmark: Shelfmark = format!("SA, Unit{index:05}, G").parse().unwrap();
    let mut workbook = UnitWorkbook::new(&shelfmark, schema);
    workbook.metric = MetricRecord {
        title: cell_text(rng),
        shelfmark: shelfmark.to_string(),
        card_count: rng.gen_range(0..500).to_string(),
        format: if rng.gen_bool(0.5) { "folio".into() } else { String::new() },
        remarks: if rng.gen_bool(0.3) { cell_text(rng) } else { String::new() },
        extra: Default::default(),
    };
    if rng.gen_bool(0.2) {
        workbook.metric.extra.insert("x_provenance".into(), cell_text(rng));
    }

    let doc_count = rng.gen_range(0..6);
    let mut next_card = 1u32;
    for _ in 0..doc_count {
        let category = rng.gen_range(1..=9u8);
        let sequence = workbook
            .documents
            .iter()
            .filter(|r| r.get("doc_no").starts_with(&format!("{category}.")))
            .count() as u32
            + 1;
        let mut record = clean_row(rng, category, sequence);
        if rng.gen_bool(0.7) {
            let span = rng.gen_range(1..4);
            record.set("cards", format!("{next_card}-{}", next_card + span - 1));
            next_card += span;
        }
        workbook.documents.push(record);
    }

    if rng.gen_bool(0.4) {
        let bindings: Vec<ScanBinding> = (1..next_card)
            .map(|card| ScanBinding::new(card, "recto", format!("{card:04}r.tif")))
            .collect();
        workbook.map = Some(bindings);
    }
    workbook
}

/// Fault kinds the injector can plant in a clean workbook.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    BlockedField,
    MandatoryMissing,
    BadDate,
    DuplicateDocno,
    BadDocno,
    BadCards,
    BadSecRef,
}

pub const ALL_FAULTS: [Fault; 7] = [
    Fault::BlockedField,
    Fault::MandatoryMissing,
    Fault::BadDate,
    Fault::DuplicateDocno,
    Fault::BadDocno,
    Fault::BadCards,
    Fault::BadSecRef,
];

/// Plant one fault into a workbook that has at least one document row.
pub fn inject_fault(rng: &mut ChaCha8Rng, workbook: &mut UnitWorkbook, fault: Fault) {
    if workbook.documents.is_empty() {
        workbook.documents.push(clean_row(rng, 2, 1));
    }
    let index = rng.gen_range(0..workbook.documents.len());
    match fault {
        Fault::BlockedField => {
            let record = &mut workbook.documents[index];
            record.set("doc_no", "1.1");
            record.set("sender", "should not be here");
        }
        Fault::MandatoryMissing => workbook.documents[index].set("title", ""),
        Fault::BadDate => workbook.documents[index].set("date", "1900-02-29"),
        Fault::DuplicateDocno => {
            let copy = workbook.documents[index].get("doc_no").to_string();
            let mut dup = clean_row(rng, 2, 1);
            dup.set("doc_no", copy);
            workbook.documents.push(dup);
        }
        Fault::BadDocno => workbook.documents[index].set("doc_no", "10.03"),
        Fault::BadCards => workbook.documents[index].set("cards", "9-3"),
        Fault::BadSecRef => workbook.documents[index].set("place_sec", "P-999999"),
    }
}

/// A catalog with `persons` person entries and `places` place entries.
pub fn generated_catalog(rng: &mut ChaCha8Rng, persons: u32, places: u32) -> SecCatalog {
    let mut catalog = SecCatalog::new();
    for i in 1..=persons {
        let birth = rng.gen_range(1500..1850);
        catalog.insert_person(SecPersonEntry {
            id: format!("P-{i:06}"),
            preferred_name: format!("Person {i:06}"),
            variant_names: vec![format!("Variant {i:06}")],
            birth: birth.to_string(),
            death: (birth + rng.gen_range(20..100)).to_string(),
            external_urls: vec![format!("https://d-nb.info/gnd/{i}")],
            notes: String::new(),
        });
    }
    for i in 1..=places {
        catalog.insert_place(SecPlaceEntry {
            id: format!("L-{i:06}"),
            preferred_name: format!("Place {i:06}"),
            variant_names: Vec::new(),
            external_urls: vec![format!("https://www.geonames.org/{i}/")],
            notes: String::new(),
        });
    }
    catalog
}
