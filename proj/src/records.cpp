#include "records.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <charconv>
#include <chrono>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "config.hpp"

namespace fuzzyshape {

namespace {

std::string json_string(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }
std::string json_number(double v) { return nlohmann::json(v).dump(); }

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// Lines with any trailing '\r' removed; a final empty line is dropped.
std::vector<std::string_view> split_lines(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  auto lines = split(text, '\n');
  for (auto &l : lines) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto *end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return v;
}

// Parses the four measurement fields; returns an error message on failure.
std::variant<Measurement, std::string> parse_measurement(std::span<const std::string_view> f) {
  auto kind = parse_component_kind(f[1]);
  if (!kind) return fmt::format("unknown kind '{}'", f[1]);
  auto w = parse_int(f[2]);
  auto h = parse_int(f[3]);
  if (!w) return fmt::format("width_px '{}' is not an integer", f[2]);
  if (!h) return fmt::format("height_px '{}' is not an integer", f[3]);
  return Measurement{std::string(f[0]), *kind, *w, *h};
}

}  // namespace

std::string format_percentages(const ShapeDescription &d, int decimals) {
  std::string out;
  for (const auto &p : d.percentages) {
    if (!out.empty()) out += "  ";
    out += fmt::format("{} : {:.{}f} %", p.label, p.pct, decimals);
  }
  return out;
}

std::string format_record(const ShapeDescription &d, std::int64_t timestamp, std::string_view fingerprint,
                          int decimals) {
  std::string rounded;
  std::string full;
  for (const auto &p : d.percentages) {
    if (!rounded.empty()) {
      rounded += ',';
      full += ',';
    }
    rounded += fmt::format("{}:{:.{}f}", json_string(p.label), p.pct, decimals);
    full += fmt::format("{}:{}", json_string(p.label), json_number(p.pct));
  }
  return fmt::format(
      "{{\"measurement_id\":{},\"kind\":{},\"selected_param\":{},\"crisp_shape\":{},\"percentages\":{{{}}},"
      "\"percentages_full\":{{{}}},\"timestamp\":{},\"config_fingerprint\":{}}}",
      json_string(d.measurement_id), json_string(to_token(d.kind)), json_number(d.selected_param),
      json_number(d.crisp_shape), rounded, full, timestamp, json_string(fingerprint));
}

std::int64_t utc_now_seconds() {
  using namespace std::chrono;
  return duration_cast<seconds>(system_clock::now().time_since_epoch()).count();
}

RecordStore::RecordStore(const std::filesystem::path &path) : path_(path) {
  fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw Error(ErrorCode::IoError, fmt::format("{}: cannot open record store: {}", path.string(), std::strerror(errno)));
  }
}

RecordStore::~RecordStore() {
  if (fd_ >= 0) ::close(fd_);
}

void RecordStore::append(std::string_view record) {
  std::string line(record);
  line += '\n';
  std::size_t done = 0;
  while (done < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + done, line.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::IoError, fmt::format("{}: write failed: {}", path_.string(), std::strerror(errno)));
    }
    done += static_cast<std::size_t>(n);
  }
}

std::vector<CsvRow> parse_measurements_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "id,kind,width_px,height_px") {
    throw Error(ErrorCode::ParseError, "CSV header must be exactly 'id,kind,width_px,height_px'");
  }
  std::vector<CsvRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split(lines[i], ',');
    if (fields.size() != 4) {
      rows.emplace_back(RowError{i + 1, fmt::format("expected 4 fields, found {}", fields.size())});
      continue;
    }
    auto parsed = parse_measurement(fields);
    if (auto *err = std::get_if<std::string>(&parsed)) {
      rows.emplace_back(RowError{i + 1, std::move(*err)});
    } else {
      rows.emplace_back(std::get<Measurement>(std::move(parsed)));
    }
  }
  return rows;
}

std::vector<CalibrationRow> parse_calibration_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines[0] != "id,kind,width_px,height_px,expected_label") {
    throw Error(ErrorCode::InvalidRow, "CSV header must be exactly 'id,kind,width_px,height_px,expected_label'");
  }
  std::vector<CalibrationRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split(lines[i], ',');
    if (fields.size() != 5) {
      throw Error(ErrorCode::InvalidRow, fmt::format("line {}: expected 5 fields, found {}", i + 1, fields.size()));
    }
    auto parsed = parse_measurement(std::span(fields).first(4));
    if (auto *err = std::get_if<std::string>(&parsed)) {
      throw Error(ErrorCode::InvalidRow, fmt::format("line {}: {}", i + 1, *err));
    }
    rows.push_back({std::get<Measurement>(std::move(parsed)), std::string(fields[4])});
  }
  return rows;
}

std::string read_text_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, fmt::format("{}: cannot read file", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

BatchSummary run_batch(const ShapeSystemRegistry &reg, const std::filesystem::path &input_csv,
                       const std::filesystem::path &output_path, const BatchOptions &options) {
  const auto rows = parse_measurements_csv(read_text_file(input_csv));

  struct Outcome {
    std::optional<ShapeDescription> desc;
    std::string error;
  };
  std::vector<Outcome> outcomes(rows.size());

  // Workers claim rows through a shared counter; results land in their own
  // slot so appending below stays in input order.
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      const auto *m = std::get_if<Measurement>(&rows[i]);
      if (!m) continue;
      try {
        outcomes[i].desc = classify(*m, reg);
      } catch (const Error &e) {
        outcomes[i].error = e.what();
      }
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(rows.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
  }

  BatchSummary summary;
  summary.rows = rows.size();
  RecordStore store(output_path);
  const std::string fingerprint = config_fingerprint(reg);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t line = i + 2;
    if (const auto *err = std::get_if<RowError>(&rows[i])) {
      summary.errors.push_back(*err);
    } else if (!outcomes[i].desc) {
      summary.errors.push_back({line, outcomes[i].error});
    } else {
      const std::int64_t ts = options.timestamp ? *options.timestamp : utc_now_seconds();
      store.append(format_record(*outcomes[i].desc, ts, fingerprint, reg.engine().rounding_decimals));
      ++summary.records;
      continue;
    }
    spdlog::warn("{}:{}: skipped: {}", input_csv.string(), summary.errors.back().line, summary.errors.back().message);
  }
  return summary;
}

std::string curves_csv(const ShapeSystemRegistry &reg, SystemKey key, int resolution) {
  if (resolution < 2) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("resolution must be >= 2 (got {})", resolution));
  }
  const ShapeSystem &sys = reg.system(key);
  const Universe u = sys.input().universe();
  const Universe uo = sys.output().universe();

  std::string out = "x";
  for (const auto &t : sys.input().terms()) out += fmt::format(",{}:{}", sys.input().name(), t.label);
  for (const auto &t : sys.output().terms()) {
    out += fmt::format(",{0}:{1}:upper,{0}:{1}:lower", sys.output().name(), t.label);
  }
  out += '\n';
  const auto n = static_cast<std::size_t>(resolution);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = u.lo + static_cast<double>(i) * (u.hi - u.lo) / static_cast<double>(n - 1);
    out += fmt::format("{}", x);
    for (const auto &t : sys.input().terms()) out += fmt::format(",{}", t.mf(x));
    for (const auto &t : sys.output().terms()) {
      const auto m = uo.contains(x) ? t.mf(x) : MembershipInterval{0.0, 0.0};
      out += fmt::format(",{},{}", m.upper, m.lower);
    }
    out += '\n';
  }
  return out;
}

void export_curves(const ShapeSystemRegistry &reg, SystemKey key, int resolution,
                   const std::filesystem::path &out_path) {
  const std::string text = curves_csv(reg, key, resolution);
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, fmt::format("{}: cannot write curve file", out_path.string()));
  out << text;
  if (!out) throw Error(ErrorCode::IoError, fmt::format("{}: write failed", out_path.string()));
}

}  // namespace fuzzyshape
