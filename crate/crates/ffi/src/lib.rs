//! C ABI for the archival metadata toolkit.
//!
//! The surface follows the usual opaque-handle pattern: constructors hand
//! out pointers to boxed Rust values, every fallible function returns an
//! [`ScStatus`] code, and `sc_last_error` yields a human-readable message
//! for the most recent failure on the calling thread. Strings returned by
//! `sc_*` functions are NUL-terminated copies owned by the caller; release
//! them with `sc_string_free`.
//!
//! The generated header lands in `include/scriptorium.h`.

use libc::c_char;
use scriptorium::check::check_unit;
use scriptorium::ingest::{load_unit_workbook, save_unit_workbook, UnitWorkbook};
use scriptorium::model::SchemaConfig;
use scriptorium::sec::{load_catalog, SecCatalog};
use scriptorium::semantic::{render_report, validate_sec, validate_unit, ValidationReport};
use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::path::Path;

/// Status code returned by fallible functions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScStatus {
    /// Success.
    Ok = 0,
    /// A required pointer was null or a string was not valid UTF-8.
    InvalidArgument = 1,
    /// File or directory could not be read or written.
    Io = 2,
    /// Content exists but does not parse (bad CSV, headers, encoding).
    Parse = 3,
    /// Operation refused in the current state.
    Precondition = 4,
}

/// Field schema handle.
pub struct ScSchema(SchemaConfig);
/// Unit workbook handle.
pub struct ScWorkbook(UnitWorkbook);
/// Authority catalog handle.
pub struct ScSecCatalog(SecCatalog);
/// Validation report handle.
pub struct ScReport(ValidationReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: impl Into<String>) {
    let message = message.into().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(message).ok();
    });
}

fn to_c_string(s: &str) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map(CString::into_raw).unwrap_or(std::ptr::null_mut())
}

/// # Safety
/// `ptr` must be null or a pointer previously returned by this library's
/// string-returning functions.
#[no_mangle]
pub unsafe extern "C" fn sc_string_free(ptr: *mut c_char) {
    if !ptr.is_null() {
        drop(CString::from_raw(ptr));
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn sc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread, or null.
/// The caller owns the returned string.
#[no_mangle]
pub extern "C" fn sc_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some(message) => message.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

unsafe fn path_arg<'a>(ptr: *const c_char) -> Result<&'a Path, ScStatus> {
    if ptr.is_null() {
        set_last_error("null path");
        return Err(ScStatus::InvalidArgument);
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Ok(Path::new(s)),
        Err(_) => {
            set_last_error("path is not valid UTF-8");
            Err(ScStatus::InvalidArgument)
        }
    }
}

unsafe fn str_arg<'a>(ptr: *const c_char) -> Result<&'a str, ScStatus> {
    if ptr.is_null() {
        set_last_error("null string");
        return Err(ScStatus::InvalidArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_last_error("string is not valid UTF-8");
        ScStatus::InvalidArgument
    })
}

unsafe fn ref_arg<'a, T>(ptr: *const T) -> Result<&'a T, ScStatus> {
    ptr.as_ref().ok_or_else(|| {
        set_last_error("null handle");
        ScStatus::InvalidArgument
    })
}

unsafe fn out_arg<'a, T>(ptr: *mut *mut T) -> Result<&'a mut *mut T, ScStatus> {
    ptr.as_mut().ok_or_else(|| {
        set_last_error("null out-pointer");
        ScStatus::InvalidArgument
    })
}

fn ingest_status(e: &scriptorium::ingest::IngestError) -> ScStatus {
    use scriptorium::ingest::IngestError as E;
    match e {
        E::Io(_) | E::MissingManifest | E::MissingSheet(_) | E::UnreadableFile(_) => ScStatus::Io,
        E::SchemaDowngrade { .. } => ScStatus::Precondition,
        _ => ScStatus::Parse,
    }
}

/// The built-in field schema.
#[no_mangle]
pub extern "C" fn sc_schema_default() -> *mut ScSchema {
    Box::into_raw(Box::new(ScSchema(SchemaConfig::default())))
}

/// Load a schema from a TOML file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sc_schema_load(path: *const c_char, out: *mut *mut ScSchema) -> ScStatus {
    let (path, out) = match (path_arg(path), out_arg(out)) {
        (Ok(p), Ok(o)) => (p, o),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    match SchemaConfig::load(path) {
        Ok(schema) => {
            *out = Box::into_raw(Box::new(ScSchema(schema)));
            ScStatus::Ok
        }
        Err(e) => {
            set_last_error(e.to_string());
            match e {
                scriptorium::model::SchemaError::Io(_) => ScStatus::Io,
                _ => ScStatus::Parse,
            }
        }
    }
}

/// # Safety
/// `schema` must be null or a pointer from `sc_schema_default`/`sc_schema_load`.
#[no_mangle]
pub unsafe extern "C" fn sc_schema_free(schema: *mut ScSchema) {
    if !schema.is_null() {
        drop(Box::from_raw(schema));
    }
}

/// Load a unit workbook directory.
///
/// # Safety
/// `dir` must be a NUL-terminated string; `schema` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sc_workbook_load(
    dir: *const c_char,
    schema: *const ScSchema,
    out: *mut *mut ScWorkbook,
) -> ScStatus {
    let (dir, schema, out) = match (path_arg(dir), ref_arg(schema), out_arg(out)) {
        (Ok(d), Ok(s), Ok(o)) => (d, s, o),
        (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
    };
    match load_unit_workbook(dir, &schema.0) {
        Ok(workbook) => {
            *out = Box::into_raw(Box::new(ScWorkbook(workbook)));
            ScStatus::Ok
        }
        Err(e) => {
            set_last_error(e.to_string());
            ingest_status(&e)
        }
    }
}

/// Write a workbook back to a directory.
///
/// # Safety
/// `workbook` must be a live handle; `dir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sc_workbook_save(
    workbook: *const ScWorkbook,
    dir: *const c_char,
) -> ScStatus {
    let (workbook, dir) = match (ref_arg(workbook), path_arg(dir)) {
        (Ok(w), Ok(d)) => (w, d),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    match save_unit_workbook(&workbook.0, dir) {
        Ok(()) => ScStatus::Ok,
        Err(e) => {
            set_last_error(e.to_string());
            ingest_status(&e)
        }
    }
}

/// Unit id of a workbook; caller owns the string.
///
/// # Safety
/// `workbook` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_workbook_unit_id(workbook: *const ScWorkbook) -> *mut c_char {
    match ref_arg(workbook) {
        Ok(w) => to_c_string(&w.0.unit_id),
        Err(_) => std::ptr::null_mut(),
    }
}

/// Number of document rows.
///
/// # Safety
/// `workbook` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_workbook_document_count(workbook: *const ScWorkbook) -> u64 {
    match ref_arg(workbook) {
        Ok(w) => w.0.documents.len() as u64,
        Err(_) => 0,
    }
}

/// # Safety
/// `workbook` must be null or a live handle; it is consumed.
#[no_mangle]
pub unsafe extern "C" fn sc_workbook_free(workbook: *mut ScWorkbook) {
    if !workbook.is_null() {
        drop(Box::from_raw(workbook));
    }
}

/// Load the authority catalog directory (persons.csv + places.csv).
///
/// # Safety
/// `dir` must be a NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sc_sec_load(dir: *const c_char, out: *mut *mut ScSecCatalog) -> ScStatus {
    let (dir, out) = match (path_arg(dir), out_arg(out)) {
        (Ok(d), Ok(o)) => (d, o),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    match load_catalog(dir) {
        Ok(catalog) => {
            *out = Box::into_raw(Box::new(ScSecCatalog(catalog)));
            ScStatus::Ok
        }
        Err(e) => {
            set_last_error(e.to_string());
            match e {
                scriptorium::sec::SecError::MissingFile(_) | scriptorium::sec::SecError::Io(_) => {
                    ScStatus::Io
                }
                _ => ScStatus::Parse,
            }
        }
    }
}

/// # Safety
/// `catalog` must be null or a live handle; it is consumed.
#[no_mangle]
pub unsafe extern "C" fn sc_sec_free(catalog: *mut ScSecCatalog) {
    if !catalog.is_null() {
        drop(Box::from_raw(catalog));
    }
}

/// Run the incremental (per-row) checks and wrap the findings in a report.
///
/// # Safety
/// `workbook` and `schema` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sc_check_unit(
    workbook: *const ScWorkbook,
    schema: *const ScSchema,
    out: *mut *mut ScReport,
) -> ScStatus {
    let (workbook, schema, out) = match (ref_arg(workbook), ref_arg(schema), out_arg(out)) {
        (Ok(w), Ok(s), Ok(o)) => (w, s, o),
        (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
    };
    let findings = check_unit(&workbook.0, &schema.0);
    let report = ValidationReport::from_findings(&workbook.0.unit_id, findings);
    *out = Box::into_raw(Box::new(ScReport(report)));
    ScStatus::Ok
}

/// Run the full batch validation. On acceptance the workbook gains its MAP
/// sheet, so save it afterwards if persistence is wanted.
///
/// # Safety
/// `workbook` must be a live mutable handle; `catalog`, `schema`, `out`
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn sc_validate_unit(
    workbook: *mut ScWorkbook,
    catalog: *const ScSecCatalog,
    schema: *const ScSchema,
    out: *mut *mut ScReport,
) -> ScStatus {
    let Some(workbook) = workbook.as_mut() else {
        set_last_error("null handle");
        return ScStatus::InvalidArgument;
    };
    let (catalog, schema, out) = match (ref_arg(catalog), ref_arg(schema), out_arg(out)) {
        (Ok(c), Ok(s), Ok(o)) => (c, s, o),
        (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
    };
    let report = validate_unit(&mut workbook.0, &catalog.0, &schema.0);
    *out = Box::into_raw(Box::new(ScReport(report)));
    ScStatus::Ok
}

/// Validate the whole catalog (the coordinator's report).
///
/// # Safety
/// `catalog` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn sc_validate_sec(
    catalog: *const ScSecCatalog,
    out: *mut *mut ScReport,
) -> ScStatus {
    let (catalog, out) = match (ref_arg(catalog), out_arg(out)) {
        (Ok(c), Ok(o)) => (c, o),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    *out = Box::into_raw(Box::new(ScReport(validate_sec(&catalog.0))));
    ScStatus::Ok
}

/// 1 when the report's verdict is accepted, else 0.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_report_is_accepted(report: *const ScReport) -> i32 {
    match ref_arg(report) {
        Ok(r) => i32::from(r.0.accepted()),
        Err(_) => 0,
    }
}

/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_report_finding_count(report: *const ScReport) -> u64 {
    match ref_arg(report) {
        Ok(r) => r.0.findings.len() as u64,
        Err(_) => 0,
    }
}

/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_report_error_count(report: *const ScReport) -> u64 {
    match ref_arg(report) {
        Ok(r) => r.0.summary.errors as u64,
        Err(_) => 0,
    }
}

/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_report_warning_count(report: *const ScReport) -> u64 {
    match ref_arg(report) {
        Ok(r) => r.0.summary.warnings as u64,
        Err(_) => 0,
    }
}

/// Plain-text rendering of the report; caller owns the string.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_report_render(report: *const ScReport) -> *mut c_char {
    match ref_arg(report) {
        Ok(r) => to_c_string(&render_report(&r.0)),
        Err(_) => std::ptr::null_mut(),
    }
}

/// JSON rendering of the report; caller owns the string.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sc_report_json(report: *const ScReport) -> *mut c_char {
    match ref_arg(report) {
        Ok(r) => match serde_json::to_string_pretty(&r.0) {
            Ok(json) => to_c_string(&json),
            Err(_) => std::ptr::null_mut(),
        },
        Err(_) => std::ptr::null_mut(),
    }
}

/// # Safety
/// `report` must be null or a live handle; it is consumed.
#[no_mangle]
pub unsafe extern "C" fn sc_report_free(report: *mut ScReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Syntactic check of a document number (`x.y`).
///
/// # Safety
/// `value` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sc_docno_check(value: *const c_char) -> ScStatus {
    let value = match str_arg(value) {
        Ok(v) => v,
        Err(s) => return s,
    };
    match scriptorium::model::parse_document_number(value) {
        Ok(_) => ScStatus::Ok,
        Err(e) => {
            set_last_error(e.to_string());
            ScStatus::Parse
        }
    }
}

/// Syntactic + calendar check of a date expression.
///
/// # Safety
/// `value` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sc_date_check(value: *const c_char) -> ScStatus {
    let value = match str_arg(value) {
        Ok(v) => v,
        Err(s) => return s,
    };
    match scriptorium::model::parse_date_expression(value) {
        Ok(_) => ScStatus::Ok,
        Err(e) => {
            set_last_error(e.to_string());
            ScStatus::Parse
        }
    }
}

/// Syntactic check of a shelfmark (`SA, <Name>`).
///
/// # Safety
/// `value` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sc_shelfmark_check(value: *const c_char) -> ScStatus {
    let value = match str_arg(value) {
        Ok(v) => v,
        Err(s) => return s,
    };
    match scriptorium::model::parse_shelfmark(value) {
        Ok(_) => ScStatus::Ok,
        Err(e) => {
            set_last_error(e.to_string());
            ScStatus::Parse
        }
    }
}
