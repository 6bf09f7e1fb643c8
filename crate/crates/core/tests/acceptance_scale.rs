//! Acceptance criterion 08 — the collection-scale proxy.
//!
//! A synthetic corpus of 1,000 units x 100 documents plus a 10,000-entry
//! catalog must fully validate in one sweep inside five minutes, and the
//! sweep's memory high-water mark must track one unit plus the catalog
//! snapshot, not the corpus: the peak for 1,000 units may not outgrow the
//! peak for 200 units. A counting allocator measures live bytes precisely,
//! which is why this criterion runs in its own test binary.

use scriptorium::ingest::{save_unit_workbook, UnitWorkbook};
use scriptorium::model::{DocumentRecord, SchemaConfig, Shelfmark};
use scriptorium::pipeline::{sync_once, Store};
use scriptorium::sec::{SecCatalog, SecPersonEntry, SecPlaceEntry};
use std::alloc::{GlobalAlloc, Layout, System};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

struct CountingAllocator {
    live: AtomicUsize,
    peak: AtomicUsize,
}

unsafe impl GlobalAlloc for CountingAllocator {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let ptr = System.alloc(layout);
        if !ptr.is_null() {
            let live = self.live.fetch_add(layout.size(), Ordering::Relaxed) + layout.size();
            self.peak.fetch_max(live, Ordering::Relaxed);
        }
        ptr
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        self.live.fetch_sub(layout.size(), Ordering::Relaxed);
    }
}

#[global_allocator]
static ALLOCATOR: CountingAllocator =
    CountingAllocator { live: AtomicUsize::new(0), peak: AtomicUsize::new(0) };

fn live_bytes() -> usize {
    ALLOCATOR.live.load(Ordering::Relaxed)
}

fn reset_peak() {
    ALLOCATOR.peak.store(live_bytes(), Ordering::Relaxed);
}

fn peak_bytes() -> usize {
    ALLOCATOR.peak.load(Ordering::Relaxed)
}

const DOCS_PER_UNIT: u32 = 100;
const SEC_PERSONS: u32 = 9_000;
const SEC_PLACES: u32 = 1_000;

fn build_catalog() -> SecCatalog {
    let mut catalog = SecCatalog::new();
    for i in 1..=SEC_PERSONS {
        let birth = 1500 + (i % 300) as u16;
        catalog.insert_person(SecPersonEntry {
            id: format!("P-{i:06}"),
            preferred_name: format!("Person {i:06}"),
            variant_names: vec![format!("Variant {i:06}")],
            birth: birth.to_string(),
            death: (birth + 60).to_string(),
            external_urls: vec![format!("https://d-nb.info/gnd/{i}")],
            notes: String::new(),
        });
    }
    for i in 1..=SEC_PLACES {
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

fn build_unit(index: u32, schema: &SchemaConfig) -> UnitWorkbook {
    let shelfmark: Shelfmark = format!("SA, Unit{index:05}").parse().unwrap();
    let mut workbook = UnitWorkbook::new(&shelfmark, schema);
    workbook.metric.title = format!("Papers of person {index:05}");
    workbook.metric.card_count = DOCS_PER_UNIT.to_string();

    let mut per_category = [0u32; 9];
    for doc in 0..DOCS_PER_UNIT {
        let category = (doc % 9) as usize + 1;
        per_category[category - 1] += 1;
        let sequence = per_category[category - 1];
        let mut record = DocumentRecord::new()
            .with("doc_no", &format!("{category}.{sequence}"))
            .with("title", &format!("Document {doc} of unit {index}"))
            .with("cards", &(doc + 1).to_string());
        if doc % 3 == 0 {
            record.set("date", format!("{}", 1500 + (doc % 400)));
        }
        match category {
            2 | 7 => {
                let person = (index * 7 + doc) % SEC_PERSONS + 1;
                record.set("sender", format!("Person {person:06}"));
                record.set("sender_sec", format!("P-{person:06}"));
            }
            3 => record.set("author", "Somebody"),
            _ => {}
        }
        workbook.documents.push(record);
    }
    workbook
}

fn build_corpus(store: &Store, units: u32, schema: &SchemaConfig) {
    store.ensure_layout().unwrap();
    for index in 0..units {
        let workbook = build_unit(index, schema);
        save_unit_workbook(&workbook, &store.unit_dir(&workbook.unit_id)).unwrap();
    }
}

#[test]
fn criterion_08_scale_proxy() {
    let schema = SchemaConfig::default();
    let catalog = build_catalog();

    // reference corpus: 200 units
    let small_tmp = tempfile::tempdir().unwrap();
    let small_store = Store::open(small_tmp.path());
    build_corpus(&small_store, 200, &schema);

    let live_before_small = live_bytes();
    reset_peak();
    let small_summary = sync_once(&small_store, &catalog, &schema);
    let small_peak = peak_bytes().saturating_sub(live_before_small);
    assert_eq!(small_summary.processed, 200);
    assert_eq!(small_summary.accepted, 200, "failures: {:?}", small_summary.failures);

    // the full-scale corpus: 1,000 units x 100 documents
    let tmp = tempfile::tempdir().unwrap();
    let store = Store::open(tmp.path());
    let build_started = Instant::now();
    build_corpus(&store, 1000, &schema);
    let build_elapsed = build_started.elapsed();

    let live_before = live_bytes();
    reset_peak();
    let started = Instant::now();
    let summary = sync_once(&store, &catalog, &schema);
    let elapsed = started.elapsed();
    let large_peak = peak_bytes().saturating_sub(live_before);

    assert_eq!(summary.processed, 1000);
    assert_eq!(summary.accepted, 1000, "failures: {:?}", summary.failures);
    assert!(summary.failures.is_empty());
    assert!(
        elapsed.as_secs_f64() < 300.0,
        "full validation took {elapsed:?}, limit 5 minutes"
    );

    // streaming property: five times the corpus must not move the
    // high-water mark, beyond noise
    assert!(
        large_peak <= small_peak.saturating_mul(3) / 2 + (4 << 20),
        "sync peak grew with corpus size: 200 units -> {small_peak} B, 1000 units -> {large_peak} B"
    );

    // at-scale idempotence
    let second = sync_once(&store, &catalog, &schema);
    assert_eq!(second.processed, 0);
    assert_eq!(second.skipped, 1000);

    println!(
        "criterion 08 scale: built 1000x{DOCS_PER_UNIT} in {build_elapsed:?}, validated in {elapsed:?} (limit 300 s), \
         sync peak {:.1} MiB vs {:.1} MiB at 200 units, second run processed 0 ... pass",
        large_peak as f64 / (1024.0 * 1024.0),
        small_peak as f64 / (1024.0 * 1024.0)
    );
}
