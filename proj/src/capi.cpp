#include "fuzzyshape/fuzzyshape.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "config.hpp"
#include "face_shape.hpp"
#include "records.hpp"

struct fzs_registry {
  fuzzyshape::ShapeSystemRegistry reg;
};

struct fzs_description {
  fuzzyshape::ShapeDescription desc;
};

struct fzs_calibration {
  fuzzyshape::CalibrationReport report;
};

namespace {

using namespace fuzzyshape;

thread_local std::string g_last_error;

// Library diagnostics go to stderr so they never mix with a caller's output.
[[maybe_unused]] const bool g_logger_ready = [] {
  spdlog::set_default_logger(spdlog::stderr_color_mt("fuzzyshape"));
  return true;
}();

fzs_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return FZS_ERR_INVALID_ARGUMENT;
    case ErrorCode::InvalidMembershipFunction: return FZS_ERR_INVALID_MEMBERSHIP;
    case ErrorCode::OutOfUniverse: return FZS_ERR_OUT_OF_UNIVERSE;
    case ErrorCode::UnknownLabel: return FZS_ERR_UNKNOWN_LABEL;
    case ErrorCode::EmptyFiring: return FZS_ERR_EMPTY_FIRING;
    case ErrorCode::ZeroMass: return FZS_ERR_ZERO_MASS;
    case ErrorCode::NonConvergence: return FZS_ERR_NON_CONVERGENCE;
    case ErrorCode::InvalidRuleBase: return FZS_ERR_INVALID_RULE_BASE;
    case ErrorCode::InvalidMeasurement: return FZS_ERR_INVALID_MEASUREMENT;
    case ErrorCode::InvalidRow: return FZS_ERR_INVALID_ROW;
    case ErrorCode::ParseError: return FZS_ERR_PARSE;
    case ErrorCode::ValidationError: return FZS_ERR_VALIDATION;
    case ErrorCode::IoError: return FZS_ERR_IO;
    case ErrorCode::UnknownSystem: return FZS_ERR_UNKNOWN_SYSTEM;
  }
  return FZS_ERR_INTERNAL;
}

fzs_status fail(fzs_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
fzs_status guarded(F &&f) noexcept {
  try {
    g_last_error.clear();
    f();
    return FZS_OK;
  } catch (const Error &e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc &) {
    return fail(FZS_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(FZS_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FZS_ERR_INTERNAL, "unknown exception");
  }
}

char *dup_string(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool cond, const char *what) {
  if (!cond) throw Error(ErrorCode::InvalidArgument, what);
}

std::int64_t resolve_timestamp(std::int64_t ts) { return ts == FZS_TIMESTAMP_NOW ? utc_now_seconds() : ts; }

}  // namespace

extern "C" {

const char *fzs_version(void) { return FUZZYSHAPE_VERSION; }

const char *fzs_status_name(fzs_status status) {
  switch (status) {
    case FZS_OK: return "OK";
    case FZS_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case FZS_ERR_INVALID_MEMBERSHIP: return "InvalidMembershipFunction";
    case FZS_ERR_OUT_OF_UNIVERSE: return "OutOfUniverse";
    case FZS_ERR_UNKNOWN_LABEL: return "UnknownLabel";
    case FZS_ERR_EMPTY_FIRING: return "EmptyFiring";
    case FZS_ERR_ZERO_MASS: return "ZeroMass";
    case FZS_ERR_NON_CONVERGENCE: return "NonConvergence";
    case FZS_ERR_INVALID_RULE_BASE: return "InvalidRuleBase";
    case FZS_ERR_INVALID_MEASUREMENT: return "InvalidMeasurement";
    case FZS_ERR_INVALID_ROW: return "InvalidRow";
    case FZS_ERR_PARSE: return "ParseError";
    case FZS_ERR_VALIDATION: return "ValidationError";
    case FZS_ERR_IO: return "IoError";
    case FZS_ERR_UNKNOWN_SYSTEM: return "UnknownSystem";
    case FZS_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char *fzs_last_error(void) { return g_last_error.c_str(); }

void fzs_string_free(char *s) { std::free(s); }

void fzs_set_log_level(fzs_log_level level) {
  switch (level) {
    case FZS_LOG_DEBUG: spdlog::set_level(spdlog::level::debug); break;
    case FZS_LOG_INFO: spdlog::set_level(spdlog::level::info); break;
    case FZS_LOG_WARN: spdlog::set_level(spdlog::level::warn); break;
    case FZS_LOG_ERROR: spdlog::set_level(spdlog::level::err); break;
    case FZS_LOG_OFF: spdlog::set_level(spdlog::level::off); break;
  }
}

fzs_status fzs_registry_default(fzs_registry **out) {
  return guarded([&] {
    require(out, "out is null");
    *out = new fzs_registry{default_registry()};
  });
}

fzs_status fzs_registry_load(const char *path, fzs_registry **out) {
  return guarded([&] {
    require(path && out, "path and out must be non-null");
    *out = new fzs_registry{load_config(path)};
  });
}

fzs_status fzs_registry_parse(const char *json_text, fzs_registry **out) {
  return guarded([&] {
    require(json_text && out, "json_text and out must be non-null");
    *out = new fzs_registry{parse_config(json_text, "<text>", &default_registry())};
  });
}

void fzs_registry_free(fzs_registry *reg) { delete reg; }

fzs_status fzs_registry_serialize(const fzs_registry *reg, char **out_json) {
  return guarded([&] {
    require(reg && out_json, "reg and out_json must be non-null");
    *out_json = dup_string(serialize_config(reg->reg));
  });
}

fzs_status fzs_registry_fingerprint(const fzs_registry *reg, char **out) {
  return guarded([&] {
    require(reg && out, "reg and out must be non-null");
    *out = dup_string(config_fingerprint(reg->reg));
  });
}

fzs_status fzs_registry_rounding_decimals(const fzs_registry *reg, int *out) {
  return guarded([&] {
    require(reg && out, "reg and out must be non-null");
    *out = reg->reg.engine().rounding_decimals;
  });
}

fzs_status fzs_validate_config(const char *path, char **out_report) {
  std::string report;
  const fzs_status status = guarded([&] {
    require(path, "path is null");
    try {
      (void)load_config(path);
    } catch (const ValidationError &e) {
      for (const auto &d : e.diagnostics()) report += fmt::format("{}: {}\n", to_string(d.kind), d.message);
      throw;
    } catch (const Error &e) {
      report = fmt::format("{}: {}\n", to_string(e.code()), e.what());
      throw;
    }
  });
  if (out_report) {
    try {
      *out_report = dup_string(report);
    } catch (...) {
      *out_report = nullptr;
    }
  }
  return status;
}

fzs_status fzs_classify(const fzs_registry *reg, const char *id, const char *kind, int64_t width_px,
                        int64_t height_px, fzs_description **out) {
  return guarded([&] {
    require(reg && kind && out, "reg, kind and out must be non-null");
    auto k = parse_component_kind(kind);
    if (!k) throw Error(ErrorCode::InvalidMeasurement, fmt::format("unknown component kind '{}'", kind));
    Measurement m{id ? id : "", *k, width_px, height_px};
    *out = new fzs_description{classify(m, reg->reg)};
  });
}

void fzs_description_free(fzs_description *desc) { delete desc; }

const char *fzs_description_id(const fzs_description *desc) {
  return desc ? desc->desc.measurement_id.c_str() : nullptr;
}

const char *fzs_description_kind(const fzs_description *desc) {
  return desc ? to_token(desc->desc.kind).data() : nullptr;
}

const char *fzs_description_param_name(const fzs_description *desc) {
  return desc ? selected_param_name(desc->desc.kind).data() : nullptr;
}

double fzs_description_selected_param(const fzs_description *desc) {
  return desc ? desc->desc.selected_param : std::numeric_limits<double>::quiet_NaN();
}

double fzs_description_crisp_shape(const fzs_description *desc) {
  return desc ? desc->desc.crisp_shape : std::numeric_limits<double>::quiet_NaN();
}

void fzs_description_centroid_interval(const fzs_description *desc, double *left, double *right) {
  if (!desc) return;
  if (left) *left = desc->desc.centroid_interval.left;
  if (right) *right = desc->desc.centroid_interval.right;
}

int fzs_description_clamped(const fzs_description *desc) { return desc && desc->desc.clamped ? 1 : 0; }

size_t fzs_description_count(const fzs_description *desc) { return desc ? desc->desc.percentages.size() : 0; }

const char *fzs_description_label(const fzs_description *desc, size_t i) {
  if (!desc || i >= desc->desc.percentages.size()) return nullptr;
  return desc->desc.percentages[i].label.c_str();
}

double fzs_description_pct(const fzs_description *desc, size_t i) {
  if (!desc || i >= desc->desc.percentages.size()) return std::numeric_limits<double>::quiet_NaN();
  return desc->desc.percentages[i].pct;
}

const char *fzs_description_dominant(const fzs_description *desc) {
  if (!desc || desc->desc.percentages.empty()) return nullptr;
  return dominant_label(desc->desc).c_str();
}

fzs_status fzs_description_format(const fzs_description *desc, int decimals, char **out) {
  return guarded([&] {
    require(desc && out, "desc and out must be non-null");
    require(decimals >= 0 && decimals <= 10, "decimals must be in [0, 10]");
    *out = dup_string(format_percentages(desc->desc, decimals));
  });
}

fzs_status fzs_description_record(const fzs_registry *reg, const fzs_description *desc, int64_t timestamp,
                                  char **out) {
  return guarded([&] {
    require(reg && desc && out, "reg, desc and out must be non-null");
    *out = dup_string(format_record(desc->desc, resolve_timestamp(timestamp), config_fingerprint(reg->reg),
                                    reg->reg.engine().rounding_decimals));
  });
}

fzs_status fzs_record_append(const fzs_registry *reg, const fzs_description *desc, const char *records_path,
                             int64_t timestamp) {
  return guarded([&] {
    require(reg && desc && records_path, "reg, desc and records_path must be non-null");
    RecordStore store(records_path);
    store.append(format_record(desc->desc, resolve_timestamp(timestamp), config_fingerprint(reg->reg),
                               reg->reg.engine().rounding_decimals));
  });
}

fzs_status fzs_batch_run(const fzs_registry *reg, const char *input_csv, const char *output_path,
                         int64_t timestamp, fzs_batch_summary *summary) {
  return guarded([&] {
    require(reg && input_csv && output_path, "reg, input_csv and output_path must be non-null");
    BatchOptions options;
    if (timestamp != FZS_TIMESTAMP_NOW) options.timestamp = timestamp;
    const BatchSummary s = run_batch(reg->reg, input_csv, output_path, options);
    if (summary) *summary = {s.rows, s.records, s.errors.size()};
  });
}

fzs_status fzs_export_curves(const fzs_registry *reg, const char *system_key, int resolution,
                             const char *out_path) {
  return guarded([&] {
    require(reg && system_key && out_path, "reg, system_key and out_path must be non-null");
    auto key = parse_system_key(system_key);
    if (!key) {
      throw Error(ErrorCode::UnknownSystem,
                  fmt::format("unknown system '{}' (expected eye, eyebrow, nose or lip)", system_key));
    }
    export_curves(reg->reg, *key, resolution, out_path);
  });
}

fzs_status fzs_calibrate(const fzs_registry *reg, const char *rows_csv, int radius, double step,
                         fzs_calibration **out) {
  return guarded([&] {
    require(reg && rows_csv && out, "reg, rows_csv and out must be non-null");
    const auto rows = parse_calibration_csv(read_text_file(rows_csv));
    *out = new fzs_calibration{calibrate(reg->reg, rows, CalibrationOptions{radius, step})};
  });
}

void fzs_calibration_free(fzs_calibration *cal) { delete cal; }

int fzs_calibration_agreed(const fzs_calibration *cal) { return cal ? cal->report.agreed : 0; }

int fzs_calibration_total(const fzs_calibration *cal) { return cal ? cal->report.total : 0; }

fzs_status fzs_calibration_summary(const fzs_calibration *cal, char **out) {
  return guarded([&] {
    require(cal && out, "cal and out must be non-null");
    std::string text;
    for (const auto &s : cal->report.systems) {
      text += fmt::format("{} {}/{} offsets [{}]\n", to_token(s.key), s.agreed, s.total, fmt::join(s.offsets, ", "));
    }
    *out = dup_string(text);
  });
}

fzs_status fzs_calibration_registry(const fzs_calibration *cal, fzs_registry **out) {
  return guarded([&] {
    require(cal && out, "cal and out must be non-null");
    *out = new fzs_registry{cal->report.registry};
  });
}

}  // extern "C"
