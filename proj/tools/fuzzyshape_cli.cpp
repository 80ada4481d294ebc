// fuzzyshape command-line front end. Talks to the library only through the
// C API in <fuzzyshape/fuzzyshape.h>.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fuzzyshape/fuzzyshape.h"

namespace {

constexpr int kExitError = 2;
constexpr const char *kConfigEnv = "FUZZYSHAPE_CONFIG";

struct RegistryDeleter {
  void operator()(fzs_registry *r) const { fzs_registry_free(r); }
};
struct DescriptionDeleter {
  void operator()(fzs_description *d) const { fzs_description_free(d); }
};
struct CalibrationDeleter {
  void operator()(fzs_calibration *c) const { fzs_calibration_free(c); }
};
struct StringDeleter {
  void operator()(char *s) const { fzs_string_free(s); }
};
using Registry = std::unique_ptr<fzs_registry, RegistryDeleter>;
using Description = std::unique_ptr<fzs_description, DescriptionDeleter>;
using Calibration = std::unique_ptr<fzs_calibration, CalibrationDeleter>;
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct CliError {
  std::string message;
};

void check(fzs_status status, const std::string &context) {
  if (status != FZS_OK) {
    throw CliError{context + ": " + fzs_status_name(status) + ": " + fzs_last_error()};
  }
}

std::string config_path(const std::string &flag) {
  if (!flag.empty()) return flag;
  if (const char *env = std::getenv(kConfigEnv); env && *env) return env;
  return {};
}

Registry open_registry(const std::string &flag) {
  fzs_registry *raw = nullptr;
  const std::string path = config_path(flag);
  if (path.empty()) {
    check(fzs_registry_default(&raw), "default config");
  } else {
    check(fzs_registry_load(path.c_str(), &raw), "config " + path);
  }
  return Registry(raw);
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

const std::map<std::string, std::string> kKindAliases{{"eye", "right_eye"}, {"eyebrow", "right_eyebrow"}};

std::string canonical_kind(const std::string &kind) {
  auto it = kKindAliases.find(kind);
  return it == kKindAliases.end() ? kind : it->second;
}

int64_t resolve_timestamp(const std::optional<int64_t> &ts) { return ts ? *ts : FZS_TIMESTAMP_NOW; }

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Fuzzy shape classification of facial components from width/height measurements"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_flag;
  std::string log_level = "warn";
  app.add_option("--config", config_flag,
                 std::string("Configuration file (default: $") + kConfigEnv + " or the built-in defaults)");
  app.add_option("--log-level", log_level, "debug, info, warn, error or off")
      ->check(CLI::IsMember({"debug", "info", "warn", "error", "off"}));

  // classify
  auto *classify = app.add_subcommand("classify", "Classify one measurement and append its record");
  std::string kind;
  int64_t width = 0;
  int64_t height = 0;
  std::string id = "cli";
  std::string records = "shape_records.jsonl";
  bool no_record = false;
  std::optional<int64_t> classify_ts;
  classify->add_option("--kind", kind, "right_eye, left_eye, right_eyebrow, left_eyebrow, nose, lip (eye, eyebrow)")
      ->required();
  classify->add_option("--width", width, "Width W in pixels")->required();
  classify->add_option("--height", height, "Height H in pixels")->required();
  classify->add_option("--id", id, "Measurement id stored in the record");
  classify->add_option("--records", records, "JSON-Lines record store to append to");
  classify->add_flag("--no-record", no_record, "Do not append a record");
  classify->add_option("--timestamp", classify_ts, "Pin the record timestamp (UTC seconds)");

  // batch
  auto *batch = app.add_subcommand("batch", "Classify a CSV of measurements into a JSON-Lines record file");
  std::string batch_input;
  std::string batch_output;
  std::optional<int64_t> batch_ts;
  batch->add_option("--input", batch_input, "CSV with header id,kind,width_px,height_px")->required();
  batch->add_option("--output", batch_output, "JSON-Lines record file (appended)")->required();
  batch->add_option("--timestamp", batch_ts, "Pin every record timestamp (UTC seconds)");

  // export-curves
  auto *curves = app.add_subcommand("export-curves", "Write sampled membership curves as CSV");
  std::string curve_system;
  int curve_resolution = 101;
  std::string curve_output;
  curves->add_option("--system", curve_system, "eye, eyebrow, nose or lip")->required();
  curves->add_option("--resolution", curve_resolution, "Number of samples (>= 2)");
  curves->add_option("--output", curve_output, "Output CSV path")->required();

  // calibrate
  auto *calib = app.add_subcommand("calibrate", "Grid-search peak positions against labelled rows");
  std::string calib_rows;
  std::string calib_output;
  int calib_radius = 8;
  double calib_step = 1.0;
  calib->add_option("--rows", calib_rows, "CSV with header id,kind,width_px,height_px,expected_label")->required();
  calib->add_option("--output", calib_output, "Write the calibrated configuration here");
  calib->add_option("--radius", calib_radius, "Offsets per peak span [-radius, radius] steps");
  calib->add_option("--step", calib_step, "Offset step in universe units");

  // validate-config
  auto *validate = app.add_subcommand("validate-config", "Check a configuration file");
  std::string validate_path;
  validate->add_option("path", validate_path, "Config file (default: --config / $FUZZYSHAPE_CONFIG)");

  // dump-config
  auto *dump = app.add_subcommand("dump-config", "Print the active configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitError;
  }

  static const std::map<std::string, fzs_log_level> levels{{"debug", FZS_LOG_DEBUG},
                                                           {"info", FZS_LOG_INFO},
                                                           {"warn", FZS_LOG_WARN},
                                                           {"error", FZS_LOG_ERROR},
                                                           {"off", FZS_LOG_OFF}};
  fzs_set_log_level(levels.at(log_level));

  try {
    if (*classify) {
      auto reg = open_registry(config_flag);
      fzs_description *raw = nullptr;
      check(fzs_classify(reg.get(), id.c_str(), canonical_kind(kind).c_str(), width, height, &raw), "classify");
      Description desc(raw);
      int decimals = 2;
      check(fzs_registry_rounding_decimals(reg.get(), &decimals), "config");
      char *text = nullptr;
      check(fzs_description_format(desc.get(), decimals, &text), "format");
      OwnedString shapes(text);
      double left = 0.0;
      double right = 0.0;
      fzs_description_centroid_interval(desc.get(), &left, &right);

      std::cout << "id:          " << fzs_description_id(desc.get()) << "\n"
                << "kind:        " << fzs_description_kind(desc.get()) << "\n"
                << fzs_description_param_name(desc.get()) << ":        "
                << fixed(fzs_description_selected_param(desc.get()), 2)
                << (fzs_description_clamped(desc.get()) ? "  (clamped to universe)" : "") << "\n"
                << "crisp shape: " << fixed(fzs_description_crisp_shape(desc.get()), 3) << "  [" << fixed(left, 3)
                << ", " << fixed(right, 3) << "]\n"
                << "shape:       " << shapes.get() << "\n"
                << "dominant:    " << fzs_description_dominant(desc.get()) << "\n";
      if (!no_record) {
        check(fzs_record_append(reg.get(), desc.get(), records.c_str(), resolve_timestamp(classify_ts)),
              "record " + records);
      }
    } else if (*batch) {
      auto reg = open_registry(config_flag);
      fzs_batch_summary summary{};
      check(fzs_batch_run(reg.get(), batch_input.c_str(), batch_output.c_str(), resolve_timestamp(batch_ts),
                          &summary),
            "batch");
      std::cout << "rows: " << summary.rows << "  records: " << summary.records << "  errors: " << summary.errors
                << "\n";
    } else if (*curves) {
      auto reg = open_registry(config_flag);
      check(fzs_export_curves(reg.get(), curve_system.c_str(), curve_resolution, curve_output.c_str()),
            "export-curves");
      std::cout << "wrote " << curve_output << "\n";
    } else if (*calib) {
      auto reg = open_registry(config_flag);
      fzs_calibration *raw = nullptr;
      check(fzs_calibrate(reg.get(), calib_rows.c_str(), calib_radius, calib_step, &raw), "calibrate");
      Calibration cal(raw);
      char *text = nullptr;
      check(fzs_calibration_summary(cal.get(), &text), "calibrate");
      OwnedString summary(text);
      std::cout << summary.get() << "agreement: " << fzs_calibration_agreed(cal.get()) << "/"
                << fzs_calibration_total(cal.get()) << "\n";
      if (!calib_output.empty()) {
        fzs_registry *calibrated = nullptr;
        check(fzs_calibration_registry(cal.get(), &calibrated), "calibrate");
        Registry out_reg(calibrated);
        char *json = nullptr;
        check(fzs_registry_serialize(out_reg.get(), &json), "serialize");
        OwnedString owned(json);
        std::ofstream out(calib_output, std::ios::binary | std::ios::trunc);
        if (!(out << owned.get())) throw CliError{"cannot write " + calib_output};
        std::cout << "wrote " << calib_output << "\n";
      }
    } else if (*validate) {
      const std::string path = config_path(validate_path.empty() ? config_flag : validate_path);
      if (path.empty()) {
        Registry reg = open_registry("");
        std::cout << "built-in defaults: valid\n";
        return 0;
      }
      char *report = nullptr;
      const fzs_status status = fzs_validate_config(path.c_str(), &report);
      OwnedString owned(report);
      if (status != FZS_OK) {
        std::cerr << path << ": invalid\n" << (owned ? owned.get() : "");
        return kExitError;
      }
      std::cout << path << ": valid\n";
    } else if (*dump) {
      auto reg = open_registry(config_flag);
      char *json = nullptr;
      check(fzs_registry_serialize(reg.get(), &json), "serialize");
      OwnedString owned(json);
      std::cout << owned.get();
    }
  } catch (const CliError &e) {
    std::cerr << "error: " << e.message << "\n";
    return kExitError;
  }
  return 0;
}
