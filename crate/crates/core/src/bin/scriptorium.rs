//! Command-line front end for the digitization store.
//!
//! Exit codes: 0 clean, 2 validation errors found, 3 I/O or format failure,
//! 4 configuration error.

use clap::{Parser, Subcommand, ValueEnum};
use scriptorium::check::{annotate, check_unit, count_severity, Severity};
use scriptorium::export::{
    dc_to_csv, export_cidoc, export_dc, export_ead, export_edm, serialize_turtle, CollectionMeta,
    ExportError, IriPolicy,
};
use scriptorium::ingest::{
    import_xlsx, load_unit_workbook, migrate_workbook, save_unit_workbook, UnitWorkbook,
};
use scriptorium::model::{SchemaConfig, Shelfmark};
use scriptorium::pipeline::{
    advance_on_report, create_batch, load_batch, record_custody, sync_once, BatchError,
    CustodyEvent, CustodyLedger, LifecycleEvent, StateRecord, Store, UnitState,
};
use scriptorium::scanmap::{check_coverage, resolve_scan_folder};
use scriptorium::sec::{
    apply_proposal, load_catalog, load_proposals, save_catalog, save_proposals, Decision,
    ProposalStatus, SecCatalog,
};
use scriptorium::semantic::{
    render_report, validate_sec, validate_unit, write_report, ValidationReport,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_FINDINGS: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_CONFIG: u8 = 4;

#[derive(Parser)]
#[command(name = "scriptorium", version, about = "Archival metadata store: acquisition, validation, and export")]
struct Cli {
    /// Store root directory.
    #[arg(long, global = true, default_value = ".")]
    root: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Create a unit workbook for a shelfmark like "SA, Keppler, Johannes".
    NewUnit { shelfmark: String },
    /// Import a spreadsheet workbook into the store.
    Import { file: PathBuf },
    /// Run the incremental checks on one unit and annotate it.
    Check { unit: String },
    /// Run the batch validation on one unit or every unit.
    Validate {
        unit: Option<String>,
        #[arg(long, conflicts_with = "unit")]
        all: bool,
    },
    /// Standard Entries Catalog maintenance.
    Sec {
        #[command(subcommand)]
        command: SecCommand,
    },
    /// Scan mapping.
    Map {
        #[command(subcommand)]
        command: MapCommand,
    },
    /// Batch assembly.
    Batch {
        #[command(subcommand)]
        command: BatchCommand,
    },
    /// Export a unit or a batch.
    Export {
        /// Unit id or batch id.
        target: String,
        #[arg(long, value_enum)]
        format: ExportFormat,
        /// Base IRI for minted identifiers.
        #[arg(long, default_value = "https://data.example.org/archive/")]
        base_iri: String,
        /// Collection title for EAD output.
        #[arg(long, default_value = "Autograph collection")]
        title: String,
    },
    /// One synchronization sweep: validate changed units, write reports.
    SyncOnce,
    /// Custody ledger: record a handover or show a unit's trail.
    Custody {
        #[command(subcommand)]
        command: CustodyCommand,
    },
}

#[derive(Subcommand)]
enum SecCommand {
    /// Validate the catalog and write the coordinator report.
    Lint,
    /// Apply pending proposals in file order.
    ApplyProposals {
        /// Mark pending proposals rejected instead of accepting them.
        #[arg(long)]
        reject: bool,
    },
}

#[derive(Subcommand)]
enum MapCommand {
    /// Check scan coverage for a unit against its scan folder.
    Check {
        unit: String,
        #[arg(long)]
        scan_root: PathBuf,
    },
}

#[derive(Subcommand)]
enum BatchCommand {
    /// Collect accepted units into a batch.
    Create {
        #[arg(long, default_value_t = 1)]
        min: usize,
    },
}

#[derive(Subcommand)]
enum CustodyCommand {
    /// With --from/--to, record a handover; otherwise print the trail.
    Log {
        unit: String,
        #[arg(long, requires = "to")]
        from: Option<String>,
        #[arg(long, requires = "from")]
        to: Option<String>,
        #[arg(long, default_value = "")]
        note: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportFormat {
    Edm,
    Cidoc,
    Ead,
    Dc,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

macro_rules! fail_with {
    ($code:expr) => {
        |e| Failure::new($code, e.to_string())
    };
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn load_schema(store: &Store) -> Result<SchemaConfig, Failure> {
    store.load_schema().map_err(fail_with!(EXIT_CONFIG))
}

fn load_sec(store: &Store) -> Result<SecCatalog, Failure> {
    load_catalog(&store.sec_dir()).map_err(fail_with!(EXIT_IO))
}

fn load_unit(store: &Store, unit: &str, schema: &SchemaConfig) -> Result<UnitWorkbook, Failure> {
    let dir = store.unit_dir(unit);
    if !dir.exists() {
        return Err(Failure::new(EXIT_IO, format!("unit `{unit}` not found under {}", store.units_dir().display())));
    }
    load_unit_workbook(&dir, schema).map_err(fail_with!(EXIT_IO))
}

/// Migrate a loaded workbook to the current schema and persist the upgrade.
fn migrate_if_needed(
    workbook: UnitWorkbook,
    schema: &SchemaConfig,
    dir: &Path,
) -> Result<UnitWorkbook, Failure> {
    if workbook.schema_version >= schema.version {
        return Ok(workbook);
    }
    let migrated = migrate_workbook(&workbook, schema).map_err(fail_with!(EXIT_IO))?;
    save_unit_workbook(&migrated, dir).map_err(fail_with!(EXIT_IO))?;
    println!("migrated {} to schema version {}", migrated.unit_id, schema.version);
    Ok(migrated)
}

fn update_state_from_report(
    store: &Store,
    dir: &Path,
    report: &ValidationReport,
    workbook: &UnitWorkbook,
) -> Result<(), Failure> {
    let mut record = store.read_state(dir);
    record.state = advance_on_report(record.state, report, workbook);
    record.validated_digest = scriptorium::ingest::workbook_digest(dir).ok();
    store.write_state(dir, &record).map_err(fail_with!(EXIT_IO))
}

fn validate_one(
    store: &Store,
    unit: &str,
    catalog: &SecCatalog,
    schema: &SchemaConfig,
) -> Result<ValidationReport, Failure> {
    let dir = store.unit_dir(unit);
    let workbook = load_unit(store, unit, schema)?;
    let mut workbook = migrate_if_needed(workbook, schema, &dir)?;
    let before = workbook.clone();
    let report = validate_unit(&mut workbook, catalog, schema);
    if workbook != before {
        save_unit_workbook(&workbook, &dir).map_err(fail_with!(EXIT_IO))?;
    }
    write_report(&report, &dir).map_err(fail_with!(EXIT_IO))?;
    annotate(&workbook, &report.findings, &dir).map_err(fail_with!(EXIT_IO))?;
    update_state_from_report(store, &dir, &report, &workbook)?;
    Ok(report)
}

fn list_files_recursive(root: &Path) -> std::io::Result<Vec<String>> {
    fn walk(dir: &Path, prefix: &str, out: &mut Vec<String>) -> std::io::Result<()> {
        if !dir.exists() {
            return Ok(());
        }
        for entry in std::fs::read_dir(dir)? {
            let entry = entry?;
            let name = entry.file_name().to_string_lossy().to_string();
            let relative =
                if prefix.is_empty() { name.clone() } else { format!("{prefix}/{name}") };
            if entry.path().is_dir() {
                walk(&entry.path(), &relative, out)?;
            } else {
                out.push(relative);
            }
        }
        Ok(())
    }
    let mut files = Vec::new();
    walk(root, "", &mut files)?;
    files.sort();
    Ok(files)
}

fn export_unit(
    store: &Store,
    unit: &str,
    format: ExportFormat,
    policy: &IriPolicy,
    title: &str,
    catalog: &SecCatalog,
    schema: &SchemaConfig,
) -> Result<PathBuf, Failure> {
    let dir = store.unit_dir(unit);
    let workbook = load_unit(store, unit, schema)?;
    let report = scriptorium::semantic::read_report(&dir).ok_or_else(|| {
        Failure::new(EXIT_FINDINGS, format!("unit `{unit}` has no validation report; run `validate` first"))
    })?;

    let export_dir = dir.join("export");
    std::fs::create_dir_all(&export_dir).map_err(fail_with!(EXIT_IO))?;
    let map_export_err = |e: ExportError| match e {
        ExportError::InvalidBase(_) => Failure::new(EXIT_CONFIG, e.to_string()),
        ExportError::Io(_) => Failure::new(EXIT_IO, e.to_string()),
        _ => Failure::new(EXIT_FINDINGS, e.to_string()),
    };

    let path = match format {
        ExportFormat::Edm => {
            let triples = export_edm(&workbook, catalog, policy, &report).map_err(map_export_err)?;
            let path = export_dir.join("edm.ttl");
            std::fs::write(&path, serialize_turtle(&triples)).map_err(fail_with!(EXIT_IO))?;
            path
        }
        ExportFormat::Cidoc => {
            let triples = export_cidoc(&workbook, catalog, policy, &report).map_err(map_export_err)?;
            let path = export_dir.join("cidoc.ttl");
            std::fs::write(&path, serialize_turtle(&triples)).map_err(fail_with!(EXIT_IO))?;
            path
        }
        ExportFormat::Dc => {
            let pairs = export_dc(&workbook).map_err(map_export_err)?;
            let path = export_dir.join("dc.csv");
            std::fs::write(&path, dc_to_csv(&pairs)).map_err(fail_with!(EXIT_IO))?;
            path
        }
        ExportFormat::Ead => {
            let meta = CollectionMeta { title: title.to_string(), ..Default::default() };
            let xml = export_ead(&[(&workbook, &report)], &meta, catalog).map_err(map_export_err)?;
            let path = export_dir.join("ead.xml");
            std::fs::write(&path, xml).map_err(fail_with!(EXIT_IO))?;
            path
        }
    };

    // a successful export finishes the unit's path
    let mut record = store.read_state(&dir);
    if let Ok(next) = scriptorium::pipeline::advance(record.state, LifecycleEvent::ExportDone) {
        record.state = next;
        store.write_state(&dir, &record).map_err(fail_with!(EXIT_IO))?;
    }
    Ok(path)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let store = Store::open(&cli.root);

    match cli.command {
        Command::NewUnit { shelfmark } => {
            let shelfmark: Shelfmark = shelfmark
                .parse()
                .map_err(|e| Failure::new(EXIT_IO, format!("invalid shelfmark: {e}")))?;
            store.ensure_layout().map_err(fail_with!(EXIT_IO))?;
            let schema = load_schema(&store)?;
            let workbook = UnitWorkbook::new(&shelfmark, &schema);
            let dir = store.unit_dir(&workbook.unit_id);
            if dir.exists() {
                return Err(Failure::new(EXIT_IO, format!("unit `{}` already exists", workbook.unit_id)));
            }
            save_unit_workbook(&workbook, &dir).map_err(fail_with!(EXIT_IO))?;
            store.write_state(&dir, &StateRecord::new(UnitState::Created)).map_err(fail_with!(EXIT_IO))?;
            println!("created unit {} at {}", workbook.unit_id, dir.display());
            Ok(0)
        }

        Command::Import { file } => {
            store.ensure_layout().map_err(fail_with!(EXIT_IO))?;
            let schema = load_schema(&store)?;
            let workbook = import_xlsx(&file, &schema).map_err(fail_with!(EXIT_IO))?;
            let dir = store.unit_dir(&workbook.unit_id);
            if dir.exists() {
                return Err(Failure::new(EXIT_IO, format!("unit `{}` already exists", workbook.unit_id)));
            }
            save_unit_workbook(&workbook, &dir).map_err(fail_with!(EXIT_IO))?;
            store.write_state(&dir, &StateRecord::new(UnitState::Created)).map_err(fail_with!(EXIT_IO))?;
            println!("imported unit {} ({} documents)", workbook.unit_id, workbook.documents.len());
            Ok(0)
        }

        Command::Check { unit } => {
            let schema = load_schema(&store)?;
            let dir = store.unit_dir(&unit);
            let workbook = load_unit(&store, &unit, &schema)?;
            let workbook = migrate_if_needed(workbook, &schema, &dir)?;
            let findings = check_unit(&workbook, &schema);
            annotate(&workbook, &findings, &dir).map_err(fail_with!(EXIT_IO))?;
            for finding in &findings {
                println!("{finding}");
            }
            let errors = count_severity(&findings, Severity::Error);
            println!("{}: {} finding(s), {} error(s)", unit, findings.len(), errors);

            let mut record = store.read_state(&dir);
            if errors == 0 {
                if record.state == UnitState::Created && workbook.metric.is_complete() {
                    record.state = UnitState::MetricFilled;
                }
                if record.state == UnitState::MetricFilled && !workbook.documents.is_empty() {
                    record.state = UnitState::InDescription;
                }
                if record.state == UnitState::InDescription {
                    record.state = UnitState::Checked;
                }
            } else if let Ok(next) =
                scriptorium::pipeline::advance(record.state, LifecycleEvent::ValidationFailed)
            {
                record.state = next;
            }
            store.write_state(&dir, &record).map_err(fail_with!(EXIT_IO))?;
            Ok(if errors > 0 { EXIT_FINDINGS } else { 0 })
        }

        Command::Validate { unit, all } => {
            let schema = load_schema(&store)?;
            let catalog = load_sec(&store)?;
            let targets: Vec<String> = if all {
                store
                    .list_units()
                    .map_err(fail_with!(EXIT_IO))?
                    .into_iter()
                    .map(|(id, _)| id)
                    .collect()
            } else {
                vec![unit.ok_or_else(|| Failure::new(EXIT_CONFIG, "pass a unit id or --all"))?]
            };

            let mut rejected = 0usize;
            for target in &targets {
                let report = validate_one(&store, target, &catalog, &schema)?;
                print!("{}", render_report(&report));
                if !report.accepted() {
                    rejected += 1;
                }
            }
            Ok(if rejected > 0 { EXIT_FINDINGS } else { 0 })
        }

        Command::Sec { command } => match command {
            SecCommand::Lint => {
                let catalog = load_sec(&store)?;
                let report = validate_sec(&catalog);
                write_report(&report, &store.sec_dir()).map_err(fail_with!(EXIT_IO))?;
                print!("{}", render_report(&report));
                Ok(if report.accepted() { 0 } else { EXIT_FINDINGS })
            }
            SecCommand::ApplyProposals { reject } => {
                let sec_dir = store.sec_dir();
                let mut catalog = load_sec(&store)?;
                let mut proposals = load_proposals(&sec_dir).map_err(fail_with!(EXIT_IO))?;
                let decision = if reject { Decision::Reject } else { Decision::Accept };

                let mut applied = 0usize;
                let mut failed = 0usize;
                for proposal in proposals.persons.iter_mut().chain(proposals.places.iter_mut()) {
                    if proposal.status != ProposalStatus::Pending {
                        continue;
                    }
                    match apply_proposal(&mut catalog, proposal, decision) {
                        Ok(Some(id)) => {
                            applied += 1;
                            println!("new entry {id} ({})", proposal.payload.preferred_name);
                        }
                        Ok(None) => applied += 1,
                        Err(e) => {
                            failed += 1;
                            eprintln!("proposal by `{}` skipped: {e}", proposal.proposer);
                        }
                    }
                }
                save_catalog(&catalog, &sec_dir).map_err(fail_with!(EXIT_IO))?;
                save_proposals(&proposals, &sec_dir).map_err(fail_with!(EXIT_IO))?;
                println!("{applied} proposal(s) applied, {failed} failed");
                Ok(if failed > 0 { EXIT_FINDINGS } else { 0 })
            }
        },

        Command::Map { command } => match command {
            MapCommand::Check { unit, scan_root } => {
                let schema = load_schema(&store)?;
                let workbook = load_unit(&store, &unit, &schema)?;
                let folder = resolve_scan_folder(&unit, &scan_root);
                let files = list_files_recursive(&folder).map_err(fail_with!(EXIT_IO))?;
                let findings = check_coverage(&workbook, &files)
                    .map_err(|e| Failure::new(EXIT_FINDINGS, e.to_string()))?;
                for finding in &findings {
                    println!("{finding}");
                }
                let errors = count_severity(&findings, Severity::Error);
                println!(
                    "{}: {} scan file(s) under {}, {} finding(s), {} error(s)",
                    unit,
                    files.len(),
                    folder.display(),
                    findings.len(),
                    errors
                );

                let dir = store.unit_dir(&unit);
                let mut record = store.read_state(&dir);
                if record.state == UnitState::Batched && !files.is_empty() {
                    record.state = UnitState::Scanned;
                }
                if record.state == UnitState::Scanned && errors == 0 {
                    record.state = UnitState::Mapped;
                }
                store.write_state(&dir, &record).map_err(fail_with!(EXIT_IO))?;
                Ok(if errors > 0 { EXIT_FINDINGS } else { 0 })
            }
        },

        Command::Batch { command } => match command {
            BatchCommand::Create { min } => match create_batch(&store, min) {
                Ok(batch) => {
                    println!("created {} with {} unit(s)", batch.batch_id, batch.unit_ids.len());
                    Ok(0)
                }
                Err(BatchError::NotEnoughUnits { found, need }) => Err(Failure::new(
                    EXIT_FINDINGS,
                    format!("not enough accepted units: found {found}, need {need}; flow stays paused"),
                )),
                Err(e) => Err(Failure::new(EXIT_IO, e.to_string())),
            },
        },

        Command::Export { target, format, base_iri, title } => {
            let schema = load_schema(&store)?;
            let catalog = load_sec(&store)?;
            let policy = IriPolicy::new(&base_iri)
                .map_err(|e| Failure::new(EXIT_CONFIG, e.to_string()))?;

            if let Some(batch) = load_batch(&store, &target) {
                if format == ExportFormat::Ead {
                    let mut loaded = Vec::new();
                    for unit in &batch.unit_ids {
                        let dir = store.unit_dir(unit);
                        let workbook = load_unit(&store, unit, &schema)?;
                        let report = scriptorium::semantic::read_report(&dir).ok_or_else(|| {
                            Failure::new(EXIT_FINDINGS, format!("unit `{unit}` has no validation report"))
                        })?;
                        loaded.push((workbook, report));
                    }
                    let pairs: Vec<(&UnitWorkbook, &ValidationReport)> =
                        loaded.iter().map(|(w, r)| (w, r)).collect();
                    let meta = CollectionMeta { title, id: batch.batch_id.clone(), ..Default::default() };
                    let xml = export_ead(&pairs, &meta, &catalog).map_err(|e| match e {
                        ExportError::Io(_) => Failure::new(EXIT_IO, e.to_string()),
                        other => Failure::new(EXIT_FINDINGS, other.to_string()),
                    })?;
                    let out_dir = store.batches_dir().join(&batch.batch_id);
                    std::fs::create_dir_all(&out_dir).map_err(fail_with!(EXIT_IO))?;
                    let path = out_dir.join("ead.xml");
                    std::fs::write(&path, xml).map_err(fail_with!(EXIT_IO))?;
                    println!("wrote {}", path.display());
                } else {
                    for unit in &batch.unit_ids {
                        let path = export_unit(&store, unit, format, &policy, &title, &catalog, &schema)?;
                        println!("wrote {}", path.display());
                    }
                }
                Ok(0)
            } else {
                let path = export_unit(&store, &target, format, &policy, &title, &catalog, &schema)?;
                println!("wrote {}", path.display());
                Ok(0)
            }
        }

        Command::SyncOnce => {
            store.ensure_layout().map_err(fail_with!(EXIT_IO))?;
            let schema = load_schema(&store)?;
            let catalog = load_sec(&store)?;
            let summary = sync_once(&store, &catalog, &schema);
            println!(
                "processed={} skipped={} accepted={} rejected={} failures={}",
                summary.processed,
                summary.skipped,
                summary.accepted,
                summary.rejected,
                summary.failures.len()
            );
            for failure in &summary.failures {
                eprintln!("failed {}: {}", failure.unit_id, failure.error);
            }
            if !summary.failures.is_empty() {
                Ok(EXIT_IO)
            } else if summary.rejected > 0 {
                Ok(EXIT_FINDINGS)
            } else {
                Ok(0)
            }
        }

        Command::Custody { command } => match command {
            CustodyCommand::Log { unit, from, to, note } => {
                let path = store.custody_file();
                match (from, to) {
                    (Some(from), Some(to)) => {
                        let event = CustodyEvent::now(&unit, &from, &to, &note);
                        record_custody(&path, event).map_err(|e| match e {
                            scriptorium::pipeline::CustodyError::HolderMismatch { .. } => {
                                Failure::new(EXIT_FINDINGS, e.to_string())
                            }
                            other => Failure::new(EXIT_IO, other.to_string()),
                        })?;
                        println!("{unit}: now held by {to}");
                        Ok(0)
                    }
                    _ => {
                        let ledger = CustodyLedger::load(&path).map_err(fail_with!(EXIT_IO))?;
                        for event in ledger.unit_events(&unit) {
                            println!(
                                "{} {} -> {} {}",
                                event.timestamp, event.from_party, event.to_party, event.note
                            );
                        }
                        match ledger.holder(&unit) {
                            Some(holder) => println!("{unit}: held by {holder}"),
                            None => println!("{unit}: no custody events"),
                        }
                        Ok(0)
                    }
                }
            }
        },
    }
}
