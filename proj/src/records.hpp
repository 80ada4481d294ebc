#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "face_shape.hpp"

namespace fuzzyshape {

/// Table-style summary, e.g. "Wide : 0.05 %  Very Wide : 99.95 %".
std::string format_percentages(const ShapeDescription &d, int decimals);

/// One JSON-Lines record (no trailing newline). Rounded percentages carry
/// exactly `decimals` digits; percentages_full keeps full precision.
std::string format_record(const ShapeDescription &d, std::int64_t timestamp, std::string_view fingerprint,
                          int decimals);

std::int64_t utc_now_seconds();

/// Append-only JSON-Lines file. Each append is a single write(2) on an
/// O_APPEND descriptor, so a crash never leaves a partial record behind a
/// complete one.
class RecordStore {
 public:
  explicit RecordStore(const std::filesystem::path &path);
  ~RecordStore();
  RecordStore(const RecordStore &) = delete;
  RecordStore &operator=(const RecordStore &) = delete;

  void append(std::string_view record);

 private:
  std::filesystem::path path_;
  int fd_ = -1;
};

struct RowError {
  std::size_t line;  // 1-based line number in the input file
  std::string message;
};

using CsvRow = std::variant<Measurement, RowError>;

/// Parses `id,kind,width_px,height_px` CSV text (header required).
/// Throws Error(ParseError) on a wrong header; row problems become RowError.
std::vector<CsvRow> parse_measurements_csv(std::string_view text);

/// Parses `id,kind,width_px,height_px,expected_label` CSV text.
/// Throws Error(InvalidRow) on a wrong header or any malformed row.
std::vector<CalibrationRow> parse_calibration_csv(std::string_view text);

/// Throws Error(IoError) if the file cannot be read.
std::string read_text_file(const std::filesystem::path &path);

struct BatchOptions {
  std::optional<std::int64_t> timestamp;  // pins every record's timestamp
  unsigned threads = 0;                   // 0 = hardware concurrency
};

struct BatchSummary {
  std::size_t rows = 0;
  std::size_t records = 0;
  std::vector<RowError> errors;
};

/// Classifies every row of `input_csv` and appends one record per valid row
/// to `output_path`, in input order. Row failures are logged and skipped.
/// Throws Error(IoError) if the input cannot be read and Error(ParseError)
/// on a bad header.
BatchSummary run_batch(const ShapeSystemRegistry &reg, const std::filesystem::path &input_csv,
                       const std::filesystem::path &output_path, const BatchOptions &options = {});

/// Membership table: x, one column per input term, then upper and lower
/// columns per output term. Throws Error(InvalidArgument) when
/// resolution < 2.
std::string curves_csv(const ShapeSystemRegistry &reg, SystemKey key, int resolution);

void export_curves(const ShapeSystemRegistry &reg, SystemKey key, int resolution,
                   const std::filesystem::path &out_path);

}  // namespace fuzzyshape
