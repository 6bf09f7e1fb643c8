//! End-to-end runs of the command-line binary against a scratch store,
//! including the documented exit codes: 0 clean, 2 validation errors found,
//! 3 I/O or format failure, 4 configuration error.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_scriptorium"))
}

fn run(root: &Path, args: &[&str]) -> Output {
    bin().arg("--root").arg(root).args(args).output().expect("binary runs")
}

fn assert_exit(output: &Output, code: i32) {
    assert_eq!(
        output.status.code(),
        Some(code),
        "stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

fn write_documents(root: &Path, unit: &str, rows: &[&str]) {
    let path = root.join("units").join(unit).join("documents.csv");
    let header = std::fs::read_to_string(&path)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string();
    let mut text = header + "\n";
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    std::fs::write(&path, text).unwrap();
}

fn fill_metric(root: &Path, unit: &str, title: &str, shelfmark: &str) {
    let path = root.join("units").join(unit).join("metric.csv");
    let quoted = format!("\"{}\"", shelfmark.replace('"', "\"\""));
    std::fs::write(
        &path,
        format!("title,{title}\nshelfmark,{quoted}\ncard_count,\nformat,\nremarks,\n"),
    )
    .unwrap();
}

#[test]
fn unit_lifecycle_through_the_cli() {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path();

    let created = run(root, &["new-unit", "SA, Keppler, Johannes"]);
    assert_exit(&created, 0);
    assert!(String::from_utf8_lossy(&created.stdout).contains("sa-keppler-johannes"));

    // duplicate creation is an I/O failure
    assert_exit(&run(root, &["new-unit", "SA, Keppler, Johannes"]), 3);
    // malformed shelfmark is a format failure
    assert_exit(&run(root, &["new-unit", "Keppler"]), 3);

    // describing before the metric: blocked by the metric-first rule
    write_documents(
        root,
        "sa-keppler-johannes",
        &["2.1,Letter to T. Harriot,1608-09-02,,,,,,,,,,,,1-2"],
    );
    std::fs::write(root.join("units/sa-keppler-johannes/metric.csv"), "title,\nshelfmark,\n").unwrap();
    let checked = run(root, &["check", "sa-keppler-johannes"]);
    assert_exit(&checked, 2);
    assert!(String::from_utf8_lossy(&checked.stdout).contains("METRIC_FIRST"));

    fill_metric(root, "sa-keppler-johannes", "Letters", "SA, Keppler, Johannes");
    assert_exit(&run(root, &["check", "sa-keppler-johannes"]), 0);

    let validated = run(root, &["validate", "sa-keppler-johannes"]);
    assert_exit(&validated, 0);
    assert!(String::from_utf8_lossy(&validated.stdout).contains("verdict: accepted"));
    assert!(root.join("units/sa-keppler-johannes/report.json").exists());
    assert!(root.join("units/sa-keppler-johannes/map.csv").exists());

    // no accepted units yet (curator approval pending): batch pauses
    assert_exit(&run(root, &["batch", "create", "--min", "1"]), 2);

    // curator approves; batch succeeds
    let state_path = root.join("units/sa-keppler-johannes/state.json");
    let state = std::fs::read_to_string(&state_path).unwrap().replace("Validated", "Accepted");
    std::fs::write(&state_path, state).unwrap();
    let batched = run(root, &["batch", "create", "--min", "1"]);
    assert_exit(&batched, 0);
    assert!(String::from_utf8_lossy(&batched.stdout).contains("batch-000001"));

    // scans arrive under the sharded folder
    let scan_dir = root.join("scans/s/sa-keppler-johannes");
    std::fs::create_dir_all(&scan_dir).unwrap();
    std::fs::write(root.join("units/sa-keppler-johannes/map.csv"),
        "card_no,role,scan_file\n1,recto,0001r.tif\n2,recto,0002r.tif\n").unwrap();
    std::fs::write(scan_dir.join("0001r.tif"), "x").unwrap();
    let partial = run(root, &["map", "check", "sa-keppler-johannes", "--scan-root", root.join("scans").to_str().unwrap()]);
    assert_exit(&partial, 2);
    assert!(String::from_utf8_lossy(&partial.stdout).contains("SCAN_MISSING"));

    std::fs::write(scan_dir.join("0002r.tif"), "x").unwrap();
    assert_exit(&run(root, &["map", "check", "sa-keppler-johannes", "--scan-root", root.join("scans").to_str().unwrap()]), 0);

    // exports for the unit and for the batch
    assert_exit(&run(root, &["export", "sa-keppler-johannes", "--format", "edm"]), 0);
    assert_exit(&run(root, &["export", "sa-keppler-johannes", "--format", "cidoc"]), 0);
    assert_exit(&run(root, &["export", "sa-keppler-johannes", "--format", "dc"]), 0);
    assert_exit(&run(root, &["export", "batch-000001", "--format", "ead"]), 0);
    assert!(root.join("units/sa-keppler-johannes/export/edm.ttl").exists());
    assert!(root.join("units/sa-keppler-johannes/export/cidoc.ttl").exists());
    assert!(root.join("units/sa-keppler-johannes/export/dc.csv").exists());
    assert!(root.join("batches/batch-000001/ead.xml").exists());

    // bad base IRI is a configuration error
    assert_exit(
        &run(root, &["export", "sa-keppler-johannes", "--format", "edm", "--base-iri", "no-scheme"]),
        4,
    );

    let state = std::fs::read_to_string(&state_path).unwrap();
    assert!(state.contains("Exported"), "{state}");
}

#[test]
fn validation_failures_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path();
    run(root, &["new-unit", "SA, Faulty"]);
    fill_metric(root, "sa-faulty", "Faulty unit", "SA, Faulty");
    // sender on a category-1 document is blocked
    write_documents(root, "sa-faulty", &["1.1,Portrait,,,somebody,,,,,,,,,,"]);

    let checked = run(root, &["check", "sa-faulty"]);
    assert_exit(&checked, 2);
    assert!(String::from_utf8_lossy(&checked.stdout).contains("BLOCKED_FIELD"));

    let validated = run(root, &["validate", "sa-faulty"]);
    assert_exit(&validated, 2);
    assert!(String::from_utf8_lossy(&validated.stdout).contains("verdict: rejected"));

    // an export before acceptance is refused
    assert_exit(&run(root, &["export", "sa-faulty", "--format", "edm"]), 2);
}

#[test]
fn sync_once_is_idempotent_from_the_cli() {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path();
    run(root, &["new-unit", "SA, One"]);
    run(root, &["new-unit", "SA, Two"]);
    fill_metric(root, "sa-one", "One", "SA, One");
    fill_metric(root, "sa-two", "Two", "SA, Two");

    let first = run(root, &["sync-once"]);
    assert_exit(&first, 0);
    assert!(String::from_utf8_lossy(&first.stdout).contains("processed=2"));

    let second = run(root, &["sync-once"]);
    assert_exit(&second, 0);
    assert!(String::from_utf8_lossy(&second.stdout).contains("processed=0"));
}

#[test]
fn sec_lint_and_proposals() {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path();
    run(root, &["new-unit", "SA, Seed"]); // creates the layout
    std::fs::write(
        root.join("sec/proposals_persons.csv"),
        "id,preferred_name,variant_names,birth,death,external_urls,notes,target,proposer,status\n\
         ,\"Harriot, Thomas\",,1560,1621,,,,expert-1,pending\n",
    )
    .unwrap();

    let applied = run(root, &["sec", "apply-proposals"]);
    assert_exit(&applied, 0);
    assert!(String::from_utf8_lossy(&applied.stdout).contains("P-000001"));
    let persons = std::fs::read_to_string(root.join("sec/persons.csv")).unwrap();
    assert!(persons.contains("Harriot, Thomas"));
    let proposals = std::fs::read_to_string(root.join("sec/proposals_persons.csv")).unwrap();
    assert!(proposals.contains("accepted"));

    assert_exit(&run(root, &["sec", "lint"]), 0);
    assert!(root.join("sec/report.txt").exists());

    // plant a lifespan violation: lint now fails
    let persons = persons.replace("1621", "1821");
    std::fs::write(root.join("sec/persons.csv"), persons).unwrap();
    let lint = run(root, &["sec", "lint"]);
    assert_exit(&lint, 2);
    assert!(String::from_utf8_lossy(&lint.stdout).contains("LIFESPAN_EXCEEDED"));
}

#[test]
fn custody_chain_through_the_cli() {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path();
    run(root, &["new-unit", "SA, Held"]);

    assert_exit(&run(root, &["custody", "log", "sa-held", "--from", "vault", "--to", "scan-station"]), 0);
    // wrong holder refused
    assert_exit(&run(root, &["custody", "log", "sa-held", "--from", "vault", "--to", "curator"]), 2);
    assert_exit(&run(root, &["custody", "log", "sa-held", "--from", "scan-station", "--to", "vault"]), 0);

    let log = run(root, &["custody", "log", "sa-held"]);
    assert_exit(&log, 0);
    assert!(String::from_utf8_lossy(&log.stdout).contains("held by vault"));
}

#[test]
fn missing_unit_is_an_io_failure() {
    let tmp = tempfile::tempdir().unwrap();
    assert_exit(&run(tmp.path(), &["check", "no-such-unit"]), 3);
}

#[test]
fn broken_schema_is_a_configuration_error() {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path();
    run(root, &["new-unit", "SA, X"]);
    std::fs::write(root.join("schema.toml"), "version = \"not a number\"\n").unwrap();
    assert_exit(&run(root, &["check", "sa-x"]), 4);
}
