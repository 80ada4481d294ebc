#include "face_shape.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "config.hpp"

namespace fuzzyshape {

SystemKey system_for(ComponentKind kind) noexcept {
  switch (kind) {
    case ComponentKind::RightEye:
    case ComponentKind::LeftEye: return SystemKey::Eye;
    case ComponentKind::RightEyebrow:
    case ComponentKind::LeftEyebrow: return SystemKey::Eyebrow;
    case ComponentKind::Nose: return SystemKey::Nose;
    case ComponentKind::Lip: return SystemKey::Lip;
  }
  return SystemKey::Eye;
}

std::string_view to_token(ComponentKind kind) noexcept {
  switch (kind) {
    case ComponentKind::RightEye: return "right_eye";
    case ComponentKind::LeftEye: return "left_eye";
    case ComponentKind::RightEyebrow: return "right_eyebrow";
    case ComponentKind::LeftEyebrow: return "left_eyebrow";
    case ComponentKind::Nose: return "nose";
    case ComponentKind::Lip: return "lip";
  }
  return "";
}

std::optional<ComponentKind> parse_component_kind(std::string_view token) noexcept {
  for (auto kind : kAllComponents) {
    if (to_token(kind) == token) return kind;
  }
  return std::nullopt;
}

std::string_view to_token(SystemKey key) noexcept {
  switch (key) {
    case SystemKey::Eye: return "eye";
    case SystemKey::Eyebrow: return "eyebrow";
    case SystemKey::Nose: return "nose";
    case SystemKey::Lip: return "lip";
  }
  return "";
}

std::optional<SystemKey> parse_system_key(std::string_view token) noexcept {
  for (auto key : kAllSystems) {
    if (to_token(key) == token) return key;
  }
  return std::nullopt;
}

const std::vector<std::string> &input_vocabulary() {
  static const std::vector<std::string> labels{"Very Low", "Low", "Normal", "High", "Very High"};
  return labels;
}

const std::vector<std::string> &shape_vocabulary(SystemKey key) {
  static const std::array<std::vector<std::string>, 4> labels{{
      {"Very Large", "Large", "Normal", "Wide", "Very Wide"},
      {"Very Round", "Round", "Wavy", "Flat", "Very Flat"},
      {"Very Narrow", "Narrow", "Normal", "Wide", "Very Wide"},
      {"Very Linear", "Linear", "Low Linear", "Wavy", "Very Wavy"},
  }};
  return labels[static_cast<std::size_t>(key)];
}

DerivedParams derive_params(const Measurement &m) {
  if (m.width_px < 1 || m.height_px < 1) {
    throw Error(ErrorCode::InvalidMeasurement,
                fmt::format("measurement '{}' needs width and height >= 1 (got W={}, H={})", m.id, m.width_px,
                            m.height_px));
  }
  DerivedParams d{};
  d.hbw = static_cast<double>(m.height_px) / static_cast<double>(m.width_px);
  d.wbh = 1.0 / d.hbw;
  d.hbwp = d.hbw * 100.0;
  d.wbhp = d.wbh * 100.0;
  d.selected = m.kind == ComponentKind::Nose ? d.wbhp : d.hbwp;
  return d;
}

std::string_view selected_param_name(ComponentKind kind) noexcept {
  return kind == ComponentKind::Nose ? "WBHP" : "HBWP";
}

struct ShapeSystem::Parts {
  LinguisticVariable input;
  OutputVariable output;
  RuleBase rules;
};

namespace {

constexpr std::size_t kTermCount = 5;

std::vector<Diagnostic> check_params(SystemKey key, const SystemParams &p) {
  std::vector<Diagnostic> d;
  const auto sys = to_token(key);
  auto add = [&](DiagnosticKind kind, std::string msg) { d.push_back({kind, fmt::format("{}: {}", sys, msg)}); };

  if (!std::isfinite(p.universe.lo) || !std::isfinite(p.universe.hi) || !(p.universe.lo < p.universe.hi)) {
    add(DiagnosticKind::InvalidParameter, fmt::format("universe [{}, {}] is empty", p.universe.lo, p.universe.hi));
    return d;
  }
  if (!(p.fou_inset >= 0.0 && p.fou_inset < 0.5)) {
    add(DiagnosticKind::InvalidParameter, fmt::format("fou_inset {} outside [0, 0.5)", p.fou_inset));
  }
  if (!(p.fou_lower_height >= 0.0 && p.fou_lower_height <= 1.0)) {
    add(DiagnosticKind::InvalidParameter, fmt::format("fou_lower_height {} outside [0, 1]", p.fou_lower_height));
  }
  auto check_count = [&](std::size_t n, std::string_view what) {
    if (n != kTermCount) add(DiagnosticKind::WrongTermCount, fmt::format("{} has {} entries, expected 5", what, n));
  };
  check_count(p.input_labels.size(), "input labels");
  check_count(p.input_peaks.size(), "input peaks");
  check_count(p.output_labels.size(), "output labels");
  check_count(p.output_peaks.size(), "output peaks");
  check_count(p.rules.size(), "rules");

  if (p.input_labels != input_vocabulary()) {
    add(DiagnosticKind::LabelMismatch,
        fmt::format("input labels must be [{}]", fmt::join(input_vocabulary(), ", ")));
  }
  if (p.output_labels != shape_vocabulary(key)) {
    add(DiagnosticKind::LabelMismatch,
        fmt::format("output labels must be [{}]", fmt::join(shape_vocabulary(key), ", ")));
  }
  for (std::size_t i = 0; i < p.rules.size() && i < kTermCount; ++i) {
    if (i < p.input_labels.size() && i < p.output_labels.size() &&
        (p.rules[i].antecedent != p.input_labels[i] || p.rules[i].consequent != p.output_labels[i])) {
      add(DiagnosticKind::LabelMismatch,
          fmt::format("rule {} maps '{}' -> '{}', expected '{}' -> '{}'", i + 1, p.rules[i].antecedent,
                      p.rules[i].consequent, p.input_labels[i], p.output_labels[i]));
    }
  }
  for (auto &x : check_peaks(p.universe, p.input_peaks, fmt::format("{} input", sys))) d.push_back(std::move(x));
  for (auto &x : check_peaks(p.universe, p.output_peaks, fmt::format("{} output", sys))) d.push_back(std::move(x));
  return d;
}

}  // namespace

ShapeSystem::Parts ShapeSystem::build(SystemKey key, const SystemParams &p) {
  if (auto diagnostics = check_params(key, p); !diagnostics.empty()) throw ValidationError(std::move(diagnostics));

  std::vector<InputTerm> in_terms;
  const auto in_tri = ruspini_triangles(p.universe, p.input_peaks);
  for (std::size_t i = 0; i < kTermCount; ++i) in_terms.push_back({p.input_labels[i], in_tri[i]});

  std::vector<OutputTerm> out_terms;
  const auto out_tri = ruspini_triangles(p.universe, p.output_peaks);
  for (std::size_t i = 0; i < kTermCount; ++i) {
    out_terms.push_back(
        {p.output_labels[i], IntervalType2MF::with_inset(out_tri[i], p.fou_inset, p.fou_lower_height)});
  }
  LinguisticVariable input(p.input_name, p.universe, std::move(in_terms));
  OutputVariable output(p.output_name, p.universe, std::move(out_terms));

  auto diagnostics = validate_partition(input);
  for (auto &x : validate_partition(output)) diagnostics.push_back(std::move(x));
  if (!diagnostics.empty()) throw ValidationError(std::move(diagnostics));

  RuleBase rules(p.rules, input, output);
  return {std::move(input), std::move(output), std::move(rules)};
}

ShapeSystem::ShapeSystem(SystemKey key, SystemParams params) : ShapeSystem(key, params, build(key, params)) {}

ShapeSystem::ShapeSystem(SystemKey key, SystemParams params, Parts parts)
    : key_(key),
      params_(std::move(params)),
      input_(std::move(parts.input)),
      output_(std::move(parts.output)),
      rules_(std::move(parts.rules)) {}

ShapeSystemRegistry::ShapeSystemRegistry(std::array<SystemParams, 4> params, EngineSettings engine)
    : engine_(engine) {
  std::vector<Diagnostic> diagnostics;
  if (engine.resolution < 2) {
    diagnostics.push_back({DiagnosticKind::InvalidParameter,
                           fmt::format("engine: resolution {} must be >= 2", engine.resolution)});
  }
  if (engine.rounding_decimals < 0 || engine.rounding_decimals > 10) {
    diagnostics.push_back({DiagnosticKind::InvalidParameter,
                           fmt::format("engine: rounding_decimals {} outside [0, 10]", engine.rounding_decimals)});
  }
  systems_.reserve(kAllSystems.size());
  for (auto key : kAllSystems) {
    try {
      systems_.emplace_back(key, std::move(params[static_cast<std::size_t>(key)]));
    } catch (const ValidationError &e) {
      diagnostics.insert(diagnostics.end(), e.diagnostics().begin(), e.diagnostics().end());
    }
  }
  if (!diagnostics.empty()) throw ValidationError(std::move(diagnostics));
}

std::size_t ShapeSystemRegistry::rule_count() const noexcept {
  std::size_t n = 0;
  for (const auto &s : systems_) n += s.rules().rules().size();
  return n;
}

std::array<SystemParams, 4> ShapeSystemRegistry::params() const {
  std::array<SystemParams, 4> out;
  for (const auto &s : systems_) out[static_cast<std::size_t>(s.key())] = s.params();
  return out;
}

const ShapeSystemRegistry &default_registry() {
  static const ShapeSystemRegistry reg = parse_config(embedded_default_config(), "<embedded default>");
  return reg;
}

ShapeDescription classify(const Measurement &m, const ShapeSystemRegistry &reg) {
  const DerivedParams params = derive_params(m);
  const ShapeSystem &sys = reg.system(system_for(m.kind));

  ShapeDescription desc;
  desc.measurement_id = m.id;
  desc.kind = m.kind;
  desc.selected_param = params.selected;

  double x = params.selected;
  const double hi = sys.input().universe().hi;
  if (x > hi) {
    spdlog::warn("{} = {} of '{}' exceeds universe max {}; clamped", selected_param_name(m.kind), x, m.id, hi);
    x = hi;
    desc.clamped = true;
  }
  const auto fired = fire(sys.rules(), fuzzify(sys.input(), x), sys.output());
  const auto set = aggregate(fired, sys.output(), reg.engine().resolution);
  desc.centroid_interval = km_type_reduce(set);
  desc.crisp_shape = 0.5 * (desc.centroid_interval.left + desc.centroid_interval.right);
  desc.percentages = dom_percentages(sys.output(), desc.crisp_shape);
  if (desc.percentages.empty()) {
    throw Error(ErrorCode::ZeroMass, fmt::format("crisp shape {} of '{}' belongs to no term", desc.crisp_shape, m.id));
  }
  return desc;
}

const std::string &dominant_label(const ShapeDescription &d) {
  if (d.percentages.empty()) throw Error(ErrorCode::InvalidArgument, "shape description has no percentages");
  const auto it = std::max_element(d.percentages.begin(), d.percentages.end(),
                                   [](const auto &a, const auto &b) { return a.pct < b.pct; });
  return it->label;
}

namespace {

struct ScoredRow {
  double x;                           // selected parameter after clamping
  std::optional<std::size_t> target;  // expected output term index
  bool classifiable;
};

// Raw bytes of the fired output terms; two candidates sharing the key share
// the defuzzified value.
std::string fired_key(std::span<const std::pair<std::size_t, double>> firing,
                      std::span<const TriangularMF> out_tri) {
  std::string key;
  key.reserve(firing.size() * 5 * sizeof(double));
  auto put = [&](double v) { key.append(reinterpret_cast<const char *>(&v), sizeof v); };
  for (const auto &[j, s] : firing) {
    put(static_cast<double>(j));
    put(s);
    put(out_tri[j].a());
    put(out_tri[j].b());
    put(out_tri[j].c());
  }
  return key;
}

class SystemSearch {
 public:
  SystemSearch(const ShapeSystemRegistry &reg, SystemKey key, std::vector<ScoredRow> rows,
               const CalibrationOptions &options)
      : base_(reg.system(key).params()),
        resolution_(reg.engine().resolution),
        rows_(std::move(rows)),
        options_(options),
        caches_(rows_.size()) {}

  SystemCalibration run() {
    SystemCalibration result{};
    offsets_.assign(kTermCount, 0);
    best_score_ = -1;
    best_l1_ = 0;
    recurse(0);
    result.agreed = best_score_;
    result.total = static_cast<int>(rows_.size());
    result.candidates = candidates_;
    for (int o : best_offsets_) result.offsets.push_back(o * options_.step);
    return result;
  }

 private:
  void recurse(std::size_t depth) {
    if (depth == kTermCount) {
      score_candidate();
      return;
    }
    for (int o = -options_.radius; o <= options_.radius; ++o) {
      const double in = base_.input_peaks[depth] + o * options_.step;
      const double out = base_.output_peaks[depth] + o * options_.step;
      if (!base_.universe.contains(in) || !base_.universe.contains(out)) continue;
      if (depth > 0) {
        const double in_prev = base_.input_peaks[depth - 1] + offsets_[depth - 1] * options_.step;
        const double out_prev = base_.output_peaks[depth - 1] + offsets_[depth - 1] * options_.step;
        if (!(in > in_prev) || !(out > out_prev)) continue;
      }
      offsets_[depth] = o;
      recurse(depth + 1);
    }
    offsets_[depth] = 0;
  }

  void score_candidate() {
    ++candidates_;
    std::vector<double> in_peaks(kTermCount);
    std::vector<double> out_peaks(kTermCount);
    int l1 = 0;
    for (std::size_t i = 0; i < kTermCount; ++i) {
      in_peaks[i] = base_.input_peaks[i] + offsets_[i] * options_.step;
      out_peaks[i] = base_.output_peaks[i] + offsets_[i] * options_.step;
      l1 += std::abs(offsets_[i]);
    }
    // Early exit: this candidate cannot beat the incumbent on the tie-break.
    if (best_score_ == static_cast<int>(rows_.size()) && l1 >= best_l1_) return;

    const auto in_tri = ruspini_triangles(base_.universe, in_peaks);
    const auto out_tri = ruspini_triangles(base_.universe, out_peaks);

    int score = 0;
    std::vector<std::pair<std::size_t, double>> firing;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const ScoredRow &row = rows_[r];
      if (!row.classifiable || !row.target) continue;
      firing.clear();
      for (std::size_t j = 0; j < kTermCount; ++j) {
        const double s = in_tri[j](row.x);
        if (s > 0.0) firing.emplace_back(j, s);
      }
      if (firing.empty()) continue;
      const double crisp = crisp_for(r, firing, out_tri);
      std::size_t dominant = 0;
      double best_dom = -1.0;
      for (std::size_t j = 0; j < kTermCount; ++j) {
        const double dom = out_tri[j](crisp);
        if (dom > best_dom) {
          best_dom = dom;
          dominant = j;
        }
      }
      if (dominant == *row.target) ++score;
    }
    if (score > best_score_ || (score == best_score_ && l1 < best_l1_)) {
      best_score_ = score;
      best_l1_ = l1;
      best_offsets_ = offsets_;
    }
  }

  double crisp_for(std::size_t row, std::span<const std::pair<std::size_t, double>> firing,
                   std::span<const TriangularMF> out_tri) {
    auto key = fired_key(firing, out_tri);
    auto &cache = caches_[row];
    if (auto it = cache.find(key); it != cache.end()) return it->second;

    std::vector<FiredConsequent> fired;
    std::vector<OutputTerm> terms;
    for (const auto &[j, s] : firing) {
      auto mf = IntervalType2MF::with_inset(out_tri[j], base_.fou_inset, base_.fou_lower_height);
      fired.push_back({base_.output_labels[j], s, mf});
    }
    for (std::size_t j = 0; j < kTermCount; ++j) {
      terms.push_back({base_.output_labels[j], IntervalType2MF(out_tri[j])});
    }
    const OutputVariable out(base_.output_name, base_.universe, std::move(terms));
    const double crisp = defuzzify(aggregate(fired, out, resolution_));
    cache.emplace(std::move(key), crisp);
    return crisp;
  }

  const SystemParams &base_;
  int resolution_;
  std::vector<ScoredRow> rows_;
  CalibrationOptions options_;
  std::vector<std::unordered_map<std::string, double>> caches_;

  std::vector<int> offsets_;
  std::vector<int> best_offsets_;
  int best_score_ = -1;
  int best_l1_ = 0;
  std::size_t candidates_ = 0;
};

}  // namespace

CalibrationReport calibrate(const ShapeSystemRegistry &reg, const std::vector<CalibrationRow> &rows,
                            const CalibrationOptions &options) {
  if (rows.empty()) throw Error(ErrorCode::InvalidRow, "calibration needs at least one row");
  if (options.radius < 0 || !(options.step > 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("calibration radius {} / step {} invalid", options.radius, options.step));
  }
  std::array<std::vector<ScoredRow>, 4> per_system;
  for (const auto &row : rows) {
    const SystemKey key = system_for(row.measurement.kind);
    const auto &vocab = shape_vocabulary(key);
    const auto it = std::find(vocab.begin(), vocab.end(), row.expected_label);
    if (it == vocab.end()) {
      throw Error(ErrorCode::InvalidRow,
                  fmt::format("row '{}': '{}' is not a {} shape label", row.measurement.id, row.expected_label,
                              to_token(key)));
    }
    const auto &sys = reg.system(key);
    ScoredRow scored{};
    scored.target = static_cast<std::size_t>(it - vocab.begin());
    try {
      const double x = derive_params(row.measurement).selected;
      scored.x = std::min(x, sys.input().universe().hi);
      scored.classifiable = sys.input().universe().contains(scored.x);
    } catch (const Error &) {
      scored.classifiable = false;
    }
    per_system[static_cast<std::size_t>(key)].push_back(scored);
  }

  auto params = reg.params();
  std::vector<SystemCalibration> systems;
  for (auto key : kAllSystems) {
    auto &sys_rows = per_system[static_cast<std::size_t>(key)];
    if (sys_rows.empty()) continue;
    SystemSearch search(reg, key, std::move(sys_rows), options);
    SystemCalibration cal = search.run();
    cal.key = key;
    auto &p = params[static_cast<std::size_t>(key)];
    for (std::size_t i = 0; i < kTermCount; ++i) {
      p.input_peaks[i] += cal.offsets[i];
      p.output_peaks[i] += cal.offsets[i];
    }
    spdlog::info("calibrate {}: {}/{} rows agree, offsets [{}] ({} candidates)", to_token(key), cal.agreed,
                 cal.total, fmt::join(cal.offsets, ", "), cal.candidates);
    systems.push_back(std::move(cal));
  }

  CalibrationReport report{ShapeSystemRegistry(std::move(params), reg.engine()), 0, 0, std::move(systems)};
  // Re-score through the public pipeline so the report reflects classify().
  for (const auto &row : rows) {
    ++report.total;
    try {
      if (dominant_label(classify(row.measurement, report.registry)) == row.expected_label) ++report.agreed;
    } catch (const Error &) {
    }
  }
  spdlog::info("calibrate: {}/{} rows agree overall", report.agreed, report.total);
  return report;
}

}  // namespace fuzzyshape
