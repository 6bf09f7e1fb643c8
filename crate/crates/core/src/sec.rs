//! The Standard Entries Catalog: person and place authority records.
//!
//! Numerous individuals and geographic names appear under different
//! spellings across documents, so the catalog keeps one entry per person or
//! place with its variant names, and the description sheets point at entries
//! by id. Only the coordinator mutates the catalog; everyone else files
//! proposals that the coordinator accepts or rejects.
//!
//! On disk the catalog is four CSV files in one directory: `persons.csv`,
//! `places.csv`, `proposals_persons.csv`, `proposals_places.csv`. List
//! columns (`variant_names`, `external_urls`) separate items with `|`.

use crate::check::{Diagnostic, Severity, Sheet};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use thiserror::Error;

/// Whether an id names a person or a place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SecKind {
    Person,
    Place,
}

impl SecKind {
    fn prefix(self) -> char {
        match self {
            SecKind::Person => 'P',
            SecKind::Place => 'L',
        }
    }
}

/// A catalog id: `P-NNNNNN` for persons, `L-NNNNNN` for places.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SecId {
    pub kind: SecKind,
    pub number: u32,
}

impl SecId {
    pub fn new(kind: SecKind, number: u32) -> Result<Self, SecIdError> {
        if number == 0 {
            return Err(SecIdError::NumberNotPositive);
        }
        Ok(SecId { kind, number })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SecIdError {
    #[error("SEC id must look like P-000001 or L-000001")]
    Malformed,
    #[error("SEC id number must be positive")]
    NumberNotPositive,
}

impl fmt::Display for SecId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{:06}", self.kind.prefix(), self.number)
    }
}

impl FromStr for SecId {
    type Err = SecIdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (prefix, digits) = s.split_once('-').ok_or(SecIdError::Malformed)?;
        let kind = match prefix {
            "P" => SecKind::Person,
            "L" => SecKind::Place,
            _ => return Err(SecIdError::Malformed),
        };
        if digits.len() != 6 || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(SecIdError::Malformed);
        }
        let number: u32 = digits.parse().map_err(|_| SecIdError::Malformed)?;
        SecId::new(kind, number)
    }
}

impl TryFrom<String> for SecId {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse().map_err(|e: SecIdError| e.to_string())
    }
}

impl From<SecId> for String {
    fn from(id: SecId) -> String {
        id.to_string()
    }
}

/// A person authority record. `birth`/`death` stay raw text until the
/// batch validator types them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecPersonEntry {
    pub id: String,
    pub preferred_name: String,
    pub variant_names: Vec<String>,
    pub birth: String,
    pub death: String,
    pub external_urls: Vec<String>,
    pub notes: String,
}

/// A place authority record.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecPlaceEntry {
    pub id: String,
    pub preferred_name: String,
    pub variant_names: Vec<String>,
    pub external_urls: Vec<String>,
    pub notes: String,
}

impl SecPersonEntry {
    pub fn sec_id(&self) -> Option<SecId> {
        self.id.parse().ok()
    }
}

impl SecPlaceEntry {
    pub fn sec_id(&self) -> Option<SecId> {
        self.id.parse().ok()
    }
}

/// A resolved reference: either kind of entry, borrowed from the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecEntryRef<'a> {
    Person(&'a SecPersonEntry),
    Place(&'a SecPlaceEntry),
}

impl<'a> SecEntryRef<'a> {
    pub fn preferred_name(&self) -> &'a str {
        match self {
            SecEntryRef::Person(p) => &p.preferred_name,
            SecEntryRef::Place(p) => &p.preferred_name,
        }
    }

    pub fn external_urls(&self) -> &'a [String] {
        match self {
            SecEntryRef::Person(p) => &p.external_urls,
            SecEntryRef::Place(p) => &p.external_urls,
        }
    }
}

/// The in-memory catalog.
///
/// Id allocation is monotone: the watermark per kind only ever grows, so an
/// id is never reused even after its entry is removed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SecCatalog {
    pub persons: Vec<SecPersonEntry>,
    pub places: Vec<SecPlaceEntry>,
    person_watermark: u32,
    place_watermark: u32,
}

impl SecCatalog {
    pub fn new() -> SecCatalog {
        SecCatalog::default()
    }

    fn bump_watermark(&mut self, id: SecId) {
        let mark = match id.kind {
            SecKind::Person => &mut self.person_watermark,
            SecKind::Place => &mut self.place_watermark,
        };
        *mark = (*mark).max(id.number);
    }

    /// Allocate the next id of `kind`: one past the highest number ever
    /// seen, allocated, or removed.
    pub fn allocate_id(&mut self, kind: SecKind) -> SecId {
        let mark = match kind {
            SecKind::Person => &mut self.person_watermark,
            SecKind::Place => &mut self.place_watermark,
        };
        *mark += 1;
        SecId { kind, number: *mark }
    }

    /// Exact-id lookup within the kind's own table only.
    pub fn resolve_ref(&self, id: SecId) -> Option<SecEntryRef<'_>> {
        match id.kind {
            SecKind::Person => self
                .persons
                .iter()
                .find(|p| p.sec_id() == Some(id))
                .map(SecEntryRef::Person),
            SecKind::Place => self
                .places
                .iter()
                .find(|p| p.sec_id() == Some(id))
                .map(SecEntryRef::Place),
        }
    }

    pub fn insert_person(&mut self, entry: SecPersonEntry) {
        if let Some(id) = entry.sec_id() {
            self.bump_watermark(id);
        }
        self.persons.push(entry);
    }

    pub fn insert_place(&mut self, entry: SecPlaceEntry) {
        if let Some(id) = entry.sec_id() {
            self.bump_watermark(id);
        }
        self.places.push(entry);
    }

    /// Remove an entry; its number stays burned (tombstone rule).
    pub fn remove_entry(&mut self, id: SecId) -> bool {
        self.bump_watermark(id);
        match id.kind {
            SecKind::Person => {
                let before = self.persons.len();
                self.persons.retain(|p| p.sec_id() != Some(id));
                self.persons.len() != before
            }
            SecKind::Place => {
                let before = self.places.len();
                self.places.retain(|p| p.sec_id() != Some(id));
                self.places.len() != before
            }
        }
    }
}

/// Coordinator decision on a proposal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProposalStatus {
    Pending,
    Accepted,
    Rejected,
}

impl fmt::Display for ProposalStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProposalStatus::Pending => "pending",
            ProposalStatus::Accepted => "accepted",
            ProposalStatus::Rejected => "rejected",
        };
        f.write_str(s)
    }
}

impl FromStr for ProposalStatus {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pending" | "" => Ok(ProposalStatus::Pending),
            "accepted" => Ok(ProposalStatus::Accepted),
            "rejected" => Ok(ProposalStatus::Rejected),
            _ => Err(()),
        }
    }
}

/// Partial entry fields carried by a proposal. Empty scalar fields mean
/// "leave unchanged"; list fields are unioned into the target entry.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProposalPayload {
    pub preferred_name: String,
    pub variant_names: Vec<String>,
    pub birth: String,
    pub death: String,
    pub external_urls: Vec<String>,
    pub notes: String,
}

/// A suggested new entry (empty target) or change to an existing one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proposal {
    pub kind: SecKind,
    /// Canonical id text of the entry to modify; empty for a new entry.
    pub target: String,
    pub payload: ProposalPayload,
    pub proposer: String,
    pub status: ProposalStatus,
}

impl Proposal {
    pub fn new_entry(kind: SecKind, payload: ProposalPayload, proposer: &str) -> Proposal {
        Proposal { kind, target: String::new(), payload, proposer: proposer.to_string(), status: ProposalStatus::Pending }
    }

    pub fn change(kind: SecKind, target: SecId, payload: ProposalPayload, proposer: &str) -> Proposal {
        Proposal { kind, target: target.to_string(), payload, proposer: proposer.to_string(), status: ProposalStatus::Pending }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProposalError {
    #[error("proposal is not pending")]
    ProposalNotPending,
    #[error("proposal target `{0}` does not exist in the catalog")]
    TargetMissing(String),
}

fn union_into(list: &mut Vec<String>, additions: &[String]) {
    for item in additions {
        if !item.is_empty() && !list.iter().any(|x| x == item) {
            list.push(item.clone());
        }
    }
}

fn overwrite_if_nonempty(slot: &mut String, value: &str) {
    if !value.is_empty() {
        *slot = value.to_string();
    }
}

/// Apply a coordinator decision to a pending proposal.
///
/// Accepting a new-entry proposal allocates a fresh id and inserts the
/// entry; accepting a change merges the payload into the target (variant
/// names and URLs unioned, scalars overwritten only where the payload is
/// non-empty). Rejecting leaves the catalog untouched. The proposal status
/// is updated in every case that returns `Ok`.
pub fn apply_proposal(
    catalog: &mut SecCatalog,
    proposal: &mut Proposal,
    decision: Decision,
) -> Result<Option<SecId>, ProposalError> {
    if proposal.status != ProposalStatus::Pending {
        return Err(ProposalError::ProposalNotPending);
    }

    if decision == Decision::Reject {
        proposal.status = ProposalStatus::Rejected;
        return Ok(None);
    }

    let allocated = if proposal.target.is_empty() {
        let id = catalog.allocate_id(proposal.kind);
        match proposal.kind {
            SecKind::Person => catalog.insert_person(SecPersonEntry {
                id: id.to_string(),
                preferred_name: proposal.payload.preferred_name.clone(),
                variant_names: proposal.payload.variant_names.clone(),
                birth: proposal.payload.birth.clone(),
                death: proposal.payload.death.clone(),
                external_urls: proposal.payload.external_urls.clone(),
                notes: proposal.payload.notes.clone(),
            }),
            SecKind::Place => catalog.insert_place(SecPlaceEntry {
                id: id.to_string(),
                preferred_name: proposal.payload.preferred_name.clone(),
                variant_names: proposal.payload.variant_names.clone(),
                external_urls: proposal.payload.external_urls.clone(),
                notes: proposal.payload.notes.clone(),
            }),
        }
        Some(id)
    } else {
        let id: SecId = proposal
            .target
            .parse()
            .map_err(|_| ProposalError::TargetMissing(proposal.target.clone()))?;
        if id.kind != proposal.kind {
            return Err(ProposalError::TargetMissing(proposal.target.clone()));
        }
        let payload = &proposal.payload;
        match id.kind {
            SecKind::Person => {
                let entry = catalog
                    .persons
                    .iter_mut()
                    .find(|p| p.sec_id() == Some(id))
                    .ok_or_else(|| ProposalError::TargetMissing(proposal.target.clone()))?;
                overwrite_if_nonempty(&mut entry.preferred_name, &payload.preferred_name);
                overwrite_if_nonempty(&mut entry.birth, &payload.birth);
                overwrite_if_nonempty(&mut entry.death, &payload.death);
                overwrite_if_nonempty(&mut entry.notes, &payload.notes);
                union_into(&mut entry.variant_names, &payload.variant_names);
                union_into(&mut entry.external_urls, &payload.external_urls);
            }
            SecKind::Place => {
                let entry = catalog
                    .places
                    .iter_mut()
                    .find(|p| p.sec_id() == Some(id))
                    .ok_or_else(|| ProposalError::TargetMissing(proposal.target.clone()))?;
                overwrite_if_nonempty(&mut entry.preferred_name, &payload.preferred_name);
                overwrite_if_nonempty(&mut entry.notes, &payload.notes);
                union_into(&mut entry.variant_names, &payload.variant_names);
                union_into(&mut entry.external_urls, &payload.external_urls);
            }
        }
        None
    };

    proposal.status = ProposalStatus::Accepted;
    Ok(allocated)
}

/// External authority registries the catalog links to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Authority {
    Geonames,
    Gnd,
    Wikidata,
}

impl Authority {
    pub fn tag(self) -> &'static str {
        match self {
            Authority::Geonames => "GEONAMES",
            Authority::Gnd => "GND",
            Authority::Wikidata => "WIKIDATA",
        }
    }
}

fn host_matches(host: &str, domain: &str) -> bool {
    host == domain || host.ends_with(&format!(".{domain}"))
}

/// Which known authority registry a URL points into, by host.
pub fn authority_of(url: &str) -> Option<Authority> {
    let parsed = url::Url::parse(url).ok()?;
    let host = parsed.host_str()?.to_ascii_lowercase();
    if host_matches(&host, "geonames.org") {
        Some(Authority::Geonames)
    } else if host_matches(&host, "d-nb.info") {
        Some(Authority::Gnd)
    } else if host_matches(&host, "wikidata.org") {
        Some(Authority::Wikidata)
    } else {
        None
    }
}

/// Offline syntactic lint of an external authority URL.
///
/// No network access: errors for values that are not absolute http(s) URLs
/// with a host, and a warning for hosts outside the known authority table.
/// `sheet`/`row`/`column` address the cell the URL came from.
pub fn lint_authority_url(url: &str, sheet: Sheet, row: u32, column: &str) -> Vec<Diagnostic> {
    let parsed = match url::Url::parse(url) {
        Ok(u) if u.has_host() => u,
        _ => {
            return vec![Diagnostic::error(
                "URL_MALFORMED",
                sheet,
                row,
                column,
                format!("`{url}` is not an absolute URL"),
            )]
        }
    };

    if !matches!(parsed.scheme(), "http" | "https") {
        return vec![Diagnostic::error(
            "URL_SCHEME",
            sheet,
            row,
            column,
            format!("`{url}` must use http or https"),
        )];
    }

    match authority_of(url) {
        Some(_) => Vec::new(),
        None => vec![Diagnostic::new(
            Severity::Warning,
            "URL_UNRECOGNIZED_AUTHORITY",
            sheet,
            row,
            column,
            format!("`{url}` does not point at a known authority registry"),
        )],
    }
}

// ---------------------------------------------------------------------------
// Catalog directory I/O

#[derive(Debug, Error)]
pub enum SecError {
    #[error("catalog file missing: {0}")]
    MissingFile(String),
    #[error("{file}: missing column `{column}`")]
    MissingColumn { file: String, column: String },
    #[error("{file} row {row}: unknown proposal status `{status}`")]
    InvalidStatus { file: String, row: u32, status: String },
    #[error("{file} is not valid UTF-8 CSV: {source}")]
    Csv {
        file: String,
        #[source]
        source: csv::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub const PERSONS_FILE: &str = "persons.csv";
pub const PLACES_FILE: &str = "places.csv";
pub const PERSON_PROPOSALS_FILE: &str = "proposals_persons.csv";
pub const PLACE_PROPOSALS_FILE: &str = "proposals_places.csv";

const PERSON_HEADER: &[&str] =
    &["id", "preferred_name", "variant_names", "birth", "death", "external_urls", "notes"];
const PLACE_HEADER: &[&str] = &["id", "preferred_name", "variant_names", "external_urls", "notes"];
const PROPOSAL_EXTRA: &[&str] = &["target", "proposer", "status"];

fn split_list(s: &str) -> Vec<String> {
    if s.is_empty() {
        Vec::new()
    } else {
        s.split('|').map(str::to_string).collect()
    }
}

fn join_list(items: &[String]) -> String {
    items.join("|")
}

struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    fn read(dir: &Path, file: &str, required: bool) -> Result<Option<CsvTable>, SecError> {
        let path = dir.join(file);
        if !path.exists() {
            if required {
                return Err(SecError::MissingFile(file.to_string()));
            }
            return Ok(None);
        }
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .from_path(&path)
            .map_err(|source| SecError::Csv { file: file.to_string(), source })?;
        let header: Vec<String> = reader
            .headers()
            .map_err(|source| SecError::Csv { file: file.to_string(), source })?
            .iter()
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|source| SecError::Csv { file: file.to_string(), source })?;
            rows.push(record.iter().map(str::to_string).collect());
        }
        Ok(Some(CsvTable { header, rows }))
    }

    fn column(&self, file: &str, name: &str) -> Result<usize, SecError> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| SecError::MissingColumn { file: file.to_string(), column: name.to_string() })
    }

    fn cell<'a>(&'a self, row: &'a [String], index: usize) -> &'a str {
        row.get(index).map(String::as_str).unwrap_or("")
    }
}

fn read_persons(dir: &Path) -> Result<Vec<SecPersonEntry>, SecError> {
    let table = CsvTable::read(dir, PERSONS_FILE, true)?.expect("required file");
    let idx: Vec<usize> = PERSON_HEADER
        .iter()
        .map(|c| table.column(PERSONS_FILE, c))
        .collect::<Result<_, _>>()?;
    Ok(table
        .rows
        .iter()
        .map(|row| SecPersonEntry {
            id: table.cell(row, idx[0]).to_string(),
            preferred_name: table.cell(row, idx[1]).to_string(),
            variant_names: split_list(table.cell(row, idx[2])),
            birth: table.cell(row, idx[3]).to_string(),
            death: table.cell(row, idx[4]).to_string(),
            external_urls: split_list(table.cell(row, idx[5])),
            notes: table.cell(row, idx[6]).to_string(),
        })
        .collect())
}

fn read_places(dir: &Path) -> Result<Vec<SecPlaceEntry>, SecError> {
    let table = CsvTable::read(dir, PLACES_FILE, true)?.expect("required file");
    let idx: Vec<usize> = PLACE_HEADER
        .iter()
        .map(|c| table.column(PLACES_FILE, c))
        .collect::<Result<_, _>>()?;
    Ok(table
        .rows
        .iter()
        .map(|row| SecPlaceEntry {
            id: table.cell(row, idx[0]).to_string(),
            preferred_name: table.cell(row, idx[1]).to_string(),
            variant_names: split_list(table.cell(row, idx[2])),
            external_urls: split_list(table.cell(row, idx[3])),
            notes: table.cell(row, idx[4]).to_string(),
        })
        .collect())
}

fn read_proposals(dir: &Path, file: &str, kind: SecKind) -> Result<Vec<Proposal>, SecError> {
    let Some(table) = CsvTable::read(dir, file, false)? else {
        return Ok(Vec::new());
    };
    let entry_header: &[&str] = match kind {
        SecKind::Person => PERSON_HEADER,
        SecKind::Place => PLACE_HEADER,
    };
    let mut proposals = Vec::new();
    let name_i = table.column(file, "preferred_name")?;
    let variants_i = table.column(file, "variant_names")?;
    let urls_i = table.column(file, "external_urls")?;
    let notes_i = table.column(file, "notes")?;
    let target_i = table.column(file, "target")?;
    let proposer_i = table.column(file, "proposer")?;
    let status_i = table.column(file, "status")?;
    let birth_i = if entry_header.contains(&"birth") { Some(table.column(file, "birth")?) } else { None };
    let death_i = if entry_header.contains(&"death") { Some(table.column(file, "death")?) } else { None };

    for (i, row) in table.rows.iter().enumerate() {
        let status_raw = table.cell(row, status_i);
        let status = status_raw.parse().map_err(|_| SecError::InvalidStatus {
            file: file.to_string(),
            row: (i + 2) as u32,
            status: status_raw.to_string(),
        })?;
        proposals.push(Proposal {
            kind,
            target: table.cell(row, target_i).to_string(),
            payload: ProposalPayload {
                preferred_name: table.cell(row, name_i).to_string(),
                variant_names: split_list(table.cell(row, variants_i)),
                birth: birth_i.map(|j| table.cell(row, j).to_string()).unwrap_or_default(),
                death: death_i.map(|j| table.cell(row, j).to_string()).unwrap_or_default(),
                external_urls: split_list(table.cell(row, urls_i)),
                notes: table.cell(row, notes_i).to_string(),
            },
            proposer: table.cell(row, proposer_i).to_string(),
            status,
        });
    }
    Ok(proposals)
}

/// Proposals from both collector files, in file order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProposalSet {
    pub persons: Vec<Proposal>,
    pub places: Vec<Proposal>,
}

/// Load `persons.csv` and `places.csv` (both required).
pub fn load_catalog(dir: &Path) -> Result<SecCatalog, SecError> {
    let mut catalog = SecCatalog::new();
    for entry in read_persons(dir)? {
        catalog.insert_person(entry);
    }
    for entry in read_places(dir)? {
        catalog.insert_place(entry);
    }
    Ok(catalog)
}

/// Load the two proposal collector files; a missing file is an empty list.
pub fn load_proposals(dir: &Path) -> Result<ProposalSet, SecError> {
    Ok(ProposalSet {
        persons: read_proposals(dir, PERSON_PROPOSALS_FILE, SecKind::Person)?,
        places: read_proposals(dir, PLACE_PROPOSALS_FILE, SecKind::Place)?,
    })
}

fn write_csv(path: &Path, header: &[&str], rows: Vec<Vec<String>>) -> Result<(), SecError> {
    let file = path.file_name().and_then(|n| n.to_str()).unwrap_or("csv").to_string();
    let mut writer = csv::Writer::from_path(path)
        .map_err(|source| SecError::Csv { file: file.clone(), source })?;
    writer.write_record(header).map_err(|source| SecError::Csv { file: file.clone(), source })?;
    for row in rows {
        writer.write_record(&row).map_err(|source| SecError::Csv { file: file.clone(), source })?;
    }
    writer.flush()?;
    Ok(())
}

/// Write `persons.csv` and `places.csv` in entry order.
pub fn save_catalog(catalog: &SecCatalog, dir: &Path) -> Result<(), SecError> {
    std::fs::create_dir_all(dir)?;
    write_csv(
        &dir.join(PERSONS_FILE),
        PERSON_HEADER,
        catalog
            .persons
            .iter()
            .map(|p| {
                vec![
                    p.id.clone(),
                    p.preferred_name.clone(),
                    join_list(&p.variant_names),
                    p.birth.clone(),
                    p.death.clone(),
                    join_list(&p.external_urls),
                    p.notes.clone(),
                ]
            })
            .collect(),
    )?;
    write_csv(
        &dir.join(PLACES_FILE),
        PLACE_HEADER,
        catalog
            .places
            .iter()
            .map(|p| {
                vec![
                    p.id.clone(),
                    p.preferred_name.clone(),
                    join_list(&p.variant_names),
                    join_list(&p.external_urls),
                    p.notes.clone(),
                ]
            })
            .collect(),
    )?;
    Ok(())
}

/// Write both proposal files, statuses included.
pub fn save_proposals(set: &ProposalSet, dir: &Path) -> Result<(), SecError> {
    std::fs::create_dir_all(dir)?;
    let person_header: Vec<&str> =
        PERSON_HEADER.iter().chain(PROPOSAL_EXTRA).copied().collect();
    write_csv(
        &dir.join(PERSON_PROPOSALS_FILE),
        &person_header,
        set.persons
            .iter()
            .map(|p| {
                vec![
                    String::new(),
                    p.payload.preferred_name.clone(),
                    join_list(&p.payload.variant_names),
                    p.payload.birth.clone(),
                    p.payload.death.clone(),
                    join_list(&p.payload.external_urls),
                    p.payload.notes.clone(),
                    p.target.clone(),
                    p.proposer.clone(),
                    p.status.to_string(),
                ]
            })
            .collect(),
    )?;
    let place_header: Vec<&str> = PLACE_HEADER.iter().chain(PROPOSAL_EXTRA).copied().collect();
    write_csv(
        &dir.join(PLACE_PROPOSALS_FILE),
        &place_header,
        set.places
            .iter()
            .map(|p| {
                vec![
                    String::new(),
                    p.payload.preferred_name.clone(),
                    join_list(&p.payload.variant_names),
                    join_list(&p.payload.external_urls),
                    p.payload.notes.clone(),
                    p.target.clone(),
                    p.proposer.clone(),
                    p.status.to_string(),
                ]
            })
            .collect(),
    )?;
    Ok(())
}
