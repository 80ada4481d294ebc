/*
 * fuzzyshape C API.
 *
 * Every fallible call returns an fzs_status; on failure a human-readable
 * message is available from fzs_last_error() on the same thread. Handles are
 * opaque and owned by the caller, who releases them with the matching
 * *_free function. Strings returned through char** out-parameters are
 * heap-allocated and released with fzs_string_free.
 *
 * Registries are immutable; one registry may be used from many threads at
 * once.
 */
#ifndef FUZZYSHAPE_FUZZYSHAPE_H
#define FUZZYSHAPE_FUZZYSHAPE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32) || defined(__CYGWIN__)
#if defined(FUZZYSHAPE_BUILDING)
#define FZS_API __declspec(dllexport)
#else
#define FZS_API __declspec(dllimport)
#endif
#elif defined(__GNUC__) && (__GNUC__ >= 4)
#define FZS_API __attribute__((visibility("default")))
#else
#define FZS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fzs_status {
  FZS_OK = 0,
  FZS_ERR_INVALID_ARGUMENT = 1,
  FZS_ERR_INVALID_MEMBERSHIP = 2,
  FZS_ERR_OUT_OF_UNIVERSE = 3,
  FZS_ERR_UNKNOWN_LABEL = 4,
  FZS_ERR_EMPTY_FIRING = 5,
  FZS_ERR_ZERO_MASS = 6,
  FZS_ERR_NON_CONVERGENCE = 7,
  FZS_ERR_INVALID_RULE_BASE = 8,
  FZS_ERR_INVALID_MEASUREMENT = 9,
  FZS_ERR_INVALID_ROW = 10,
  FZS_ERR_PARSE = 11,
  FZS_ERR_VALIDATION = 12,
  FZS_ERR_IO = 13,
  FZS_ERR_UNKNOWN_SYSTEM = 14,
  FZS_ERR_INTERNAL = 99
} fzs_status;

typedef enum fzs_log_level {
  FZS_LOG_DEBUG = 0,
  FZS_LOG_INFO = 1,
  FZS_LOG_WARN = 2,
  FZS_LOG_ERROR = 3,
  FZS_LOG_OFF = 4
} fzs_log_level;

/* Pass as a timestamp to stamp records with the current UTC time. */
#define FZS_TIMESTAMP_NOW INT64_MIN

typedef struct fzs_registry fzs_registry;
typedef struct fzs_description fzs_description;
typedef struct fzs_calibration fzs_calibration;

typedef struct fzs_batch_summary {
  size_t rows;
  size_t records;
  size_t errors;
} fzs_batch_summary;

FZS_API const char *fzs_version(void);
FZS_API const char *fzs_status_name(fzs_status status);
FZS_API const char *fzs_last_error(void);
FZS_API void fzs_string_free(char *s);
/* Library log messages go to stderr at or above this level. */
FZS_API void fzs_set_log_level(fzs_log_level level);

/* ---- registries ---------------------------------------------------------- */

FZS_API fzs_status fzs_registry_default(fzs_registry **out);
/* Missing blocks in the file fall back to the defaults. */
FZS_API fzs_status fzs_registry_load(const char *path, fzs_registry **out);
FZS_API fzs_status fzs_registry_parse(const char *json_text, fzs_registry **out);
FZS_API void fzs_registry_free(fzs_registry *reg);
FZS_API fzs_status fzs_registry_serialize(const fzs_registry *reg, char **out_json);
FZS_API fzs_status fzs_registry_fingerprint(const fzs_registry *reg, char **out);
FZS_API fzs_status fzs_registry_rounding_decimals(const fzs_registry *reg, int *out);

/* FZS_OK if `path` holds a valid configuration. Otherwise the status says
 * why and *out_report (if non-null) lists every diagnostic, one per line. */
FZS_API fzs_status fzs_validate_config(const char *path, char **out_report);

/* ---- classification ------------------------------------------------------ */

/* kind: right_eye, left_eye, right_eyebrow, left_eyebrow, nose or lip. */
FZS_API fzs_status fzs_classify(const fzs_registry *reg, const char *id, const char *kind, int64_t width_px,
                                int64_t height_px, fzs_description **out);
FZS_API void fzs_description_free(fzs_description *desc);

FZS_API const char *fzs_description_id(const fzs_description *desc);
FZS_API const char *fzs_description_kind(const fzs_description *desc);
/* "HBWP", or "WBHP" for the nose. */
FZS_API const char *fzs_description_param_name(const fzs_description *desc);
FZS_API double fzs_description_selected_param(const fzs_description *desc);
FZS_API double fzs_description_crisp_shape(const fzs_description *desc);
FZS_API void fzs_description_centroid_interval(const fzs_description *desc, double *left, double *right);
/* Nonzero when the selected parameter exceeded the universe and was clamped. */
FZS_API int fzs_description_clamped(const fzs_description *desc);
FZS_API size_t fzs_description_count(const fzs_description *desc);
/* Null / NaN for out-of-range indices. */
FZS_API const char *fzs_description_label(const fzs_description *desc, size_t i);
FZS_API double fzs_description_pct(const fzs_description *desc, size_t i);
FZS_API const char *fzs_description_dominant(const fzs_description *desc);
/* "Wide : 0.05 %  Very Wide : 99.95 %" */
FZS_API fzs_status fzs_description_format(const fzs_description *desc, int decimals, char **out);
/* One JSON-Lines record for `desc`, without trailing newline. */
FZS_API fzs_status fzs_description_record(const fzs_registry *reg, const fzs_description *desc, int64_t timestamp,
                                          char **out);
/* Appends the record to an append-only JSON-Lines file. */
FZS_API fzs_status fzs_record_append(const fzs_registry *reg, const fzs_description *desc, const char *records_path,
                                     int64_t timestamp);

/* ---- batch, curves, calibration ------------------------------------------ */

/* Input CSV header: id,kind,width_px,height_px. Row failures are counted in
 * summary->errors and skipped; only unreadable input or a bad header fail. */
FZS_API fzs_status fzs_batch_run(const fzs_registry *reg, const char *input_csv, const char *output_path,
                                 int64_t timestamp, fzs_batch_summary *summary);

/* system_key: eye, eyebrow, nose or lip. */
FZS_API fzs_status fzs_export_curves(const fzs_registry *reg, const char *system_key, int resolution,
                                     const char *out_path);

/* Rows CSV header: id,kind,width_px,height_px,expected_label. */
FZS_API fzs_status fzs_calibrate(const fzs_registry *reg, const char *rows_csv, int radius, double step,
                                 fzs_calibration **out);
FZS_API void fzs_calibration_free(fzs_calibration *cal);
FZS_API int fzs_calibration_agreed(const fzs_calibration *cal);
FZS_API int fzs_calibration_total(const fzs_calibration *cal);
/* Per-system lines: "<system> <agreed>/<total> offsets [..]". */
FZS_API fzs_status fzs_calibration_summary(const fzs_calibration *cal, char **out);
/* New registry handle holding the calibrated parameters. */
FZS_API fzs_status fzs_calibration_registry(const fzs_calibration *cal, fzs_registry **out);

#ifdef __cplusplus
}
#endif

#endif /* FUZZYSHAPE_FUZZYSHAPE_H */
