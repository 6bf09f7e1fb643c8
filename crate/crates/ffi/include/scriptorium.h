/* C interface for the scriptorium archival metadata toolkit. */

#ifndef SCRIPTORIUM_H
#define SCRIPTORIUM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by fallible functions.
typedef enum ScStatus {
  // Success.
  SC_STATUS_OK = 0,
  // A required pointer was null or a string was not valid UTF-8.
  SC_STATUS_INVALID_ARGUMENT = 1,
  // File or directory could not be read or written.
  SC_STATUS_IO = 2,
  // Content exists but does not parse (bad CSV, headers, encoding).
  SC_STATUS_PARSE = 3,
  // Operation refused in the current state.
  SC_STATUS_PRECONDITION = 4,
} ScStatus;

// Validation report handle.
typedef struct ScReport ScReport;

// Field schema handle.
typedef struct ScSchema ScSchema;

// Authority catalog handle.
typedef struct ScSecCatalog ScSecCatalog;

// Unit workbook handle.
typedef struct ScWorkbook ScWorkbook;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// # Safety
// `ptr` must be null or a pointer previously returned by this library's
// string-returning functions.
void sc_string_free(char *ptr);

// Library version as a static string; do not free.
const char *sc_version(void);

// Message for the most recent failure on this thread, or null.
// The caller owns the returned string.
char *sc_last_error(void);

// The built-in field schema.
struct ScSchema *sc_schema_default(void);

// Load a schema from a TOML file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be a valid pointer.
enum ScStatus sc_schema_load(const char *path, struct ScSchema **out);

// # Safety
// `schema` must be null or a pointer from `sc_schema_default`/`sc_schema_load`.
void sc_schema_free(struct ScSchema *schema);

// Load a unit workbook directory.
//
// # Safety
// `dir` must be a NUL-terminated string; `schema` and `out` must be valid.
enum ScStatus sc_workbook_load(const char *dir,
                               const struct ScSchema *schema,
                               struct ScWorkbook **out);

// Write a workbook back to a directory.
//
// # Safety
// `workbook` must be a live handle; `dir` a NUL-terminated string.
enum ScStatus sc_workbook_save(const struct ScWorkbook *workbook, const char *dir);

// Unit id of a workbook; caller owns the string.
//
// # Safety
// `workbook` must be a live handle.
char *sc_workbook_unit_id(const struct ScWorkbook *workbook);

// Number of document rows.
//
// # Safety
// `workbook` must be a live handle.
uint64_t sc_workbook_document_count(const struct ScWorkbook *workbook);

// # Safety
// `workbook` must be null or a live handle; it is consumed.
void sc_workbook_free(struct ScWorkbook *workbook);

// Load the authority catalog directory (persons.csv + places.csv).
//
// # Safety
// `dir` must be a NUL-terminated string; `out` must be valid.
enum ScStatus sc_sec_load(const char *dir, struct ScSecCatalog **out);

// # Safety
// `catalog` must be null or a live handle; it is consumed.
void sc_sec_free(struct ScSecCatalog *catalog);

// Run the incremental (per-row) checks and wrap the findings in a report.
//
// # Safety
// `workbook` and `schema` must be live handles; `out` must be valid.
enum ScStatus sc_check_unit(const struct ScWorkbook *workbook,
                            const struct ScSchema *schema,
                            struct ScReport **out);

// Run the full batch validation. On acceptance the workbook gains its MAP
// sheet, so save it afterwards if persistence is wanted.
//
// # Safety
// `workbook` must be a live mutable handle; `catalog`, `schema`, `out`
// must be valid.
enum ScStatus sc_validate_unit(struct ScWorkbook *workbook,
                               const struct ScSecCatalog *catalog,
                               const struct ScSchema *schema,
                               struct ScReport **out);

// Validate the whole catalog (the coordinator's report).
//
// # Safety
// `catalog` must be a live handle; `out` must be valid.
enum ScStatus sc_validate_sec(const struct ScSecCatalog *catalog, struct ScReport **out);

// 1 when the report's verdict is accepted, else 0.
//
// # Safety
// `report` must be a live handle.
int32_t sc_report_is_accepted(const struct ScReport *report);

// # Safety
// `report` must be a live handle.
uint64_t sc_report_finding_count(const struct ScReport *report);

// # Safety
// `report` must be a live handle.
uint64_t sc_report_error_count(const struct ScReport *report);

// # Safety
// `report` must be a live handle.
uint64_t sc_report_warning_count(const struct ScReport *report);

// Plain-text rendering of the report; caller owns the string.
//
// # Safety
// `report` must be a live handle.
char *sc_report_render(const struct ScReport *report);

// JSON rendering of the report; caller owns the string.
//
// # Safety
// `report` must be a live handle.
char *sc_report_json(const struct ScReport *report);

// # Safety
// `report` must be null or a live handle; it is consumed.
void sc_report_free(struct ScReport *report);

// Syntactic check of a document number (`x.y`).
//
// # Safety
// `value` must be a NUL-terminated string.
enum ScStatus sc_docno_check(const char *value);

// Syntactic + calendar check of a date expression.
//
// # Safety
// `value` must be a NUL-terminated string.
enum ScStatus sc_date_check(const char *value);

// Syntactic check of a shelfmark (`SA, <Name>`).
//
// # Safety
// `value` must be a NUL-terminated string.
enum ScStatus sc_shelfmark_check(const char *value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SCRIPTORIUM_H */
