#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inference.hpp"
#include "linguistic.hpp"

namespace fuzzyshape {

enum class ComponentKind { RightEye, LeftEye, RightEyebrow, LeftEyebrow, Nose, Lip };

/// Left and right eyes share one fuzzy system, as do the eyebrows.
enum class SystemKey { Eye, Eyebrow, Nose, Lip };

inline constexpr std::array<SystemKey, 4> kAllSystems{SystemKey::Eye, SystemKey::Eyebrow, SystemKey::Nose,
                                                      SystemKey::Lip};
inline constexpr std::array<ComponentKind, 6> kAllComponents{ComponentKind::RightEye,     ComponentKind::LeftEye,
                                                             ComponentKind::RightEyebrow, ComponentKind::LeftEyebrow,
                                                             ComponentKind::Nose,         ComponentKind::Lip};

SystemKey system_for(ComponentKind kind) noexcept;

// Lowercase tokens: right_eye, left_eye, right_eyebrow, left_eyebrow, nose, lip.
std::string_view to_token(ComponentKind kind) noexcept;
std::optional<ComponentKind> parse_component_kind(std::string_view token) noexcept;

// Lowercase tokens: eye, eyebrow, nose, lip.
std::string_view to_token(SystemKey key) noexcept;
std::optional<SystemKey> parse_system_key(std::string_view token) noexcept;

/// Input labels shared by every system.
const std::vector<std::string> &input_vocabulary();
/// Shape labels of a system, in rule order.
const std::vector<std::string> &shape_vocabulary(SystemKey key);

struct Measurement {
  std::string id;
  ComponentKind kind;
  std::int64_t width_px;
  std::int64_t height_px;
};

struct DerivedParams {
  double hbw;
  double wbh;
  double hbwp;
  double wbhp;
  double selected;  // hbwp, or wbhp for the nose
};

/// Throws Error(InvalidMeasurement) if either dimension is below 1.
DerivedParams derive_params(const Measurement &m);

/// Name of the ratio fed to the system: "HBWP", or "WBHP" for the nose.
std::string_view selected_param_name(ComponentKind kind) noexcept;

/// Numeric parameters of one component system; everything else is derived
/// from these.
struct SystemParams {
  Universe universe{0.0, 100.0};
  std::string input_name;
  std::vector<std::string> input_labels;
  std::vector<double> input_peaks;
  std::string output_name;
  std::vector<std::string> output_labels;
  std::vector<double> output_peaks;
  double fou_inset = 0.1;
  double fou_lower_height = 0.9;
  std::vector<Rule> rules;

  friend bool operator==(const SystemParams &, const SystemParams &) = default;
};

struct EngineSettings {
  int resolution = 1001;
  int rounding_decimals = 2;

  friend bool operator==(const EngineSettings &, const EngineSettings &) = default;
};

class ShapeSystem {
 public:
  /// Throws ValidationError listing every problem with `params`.
  ShapeSystem(SystemKey key, SystemParams params);

  SystemKey key() const noexcept { return key_; }
  const SystemParams &params() const noexcept { return params_; }
  const LinguisticVariable &input() const noexcept { return input_; }
  const OutputVariable &output() const noexcept { return output_; }
  const RuleBase &rules() const noexcept { return rules_; }

 private:
  struct Parts;
  static Parts build(SystemKey key, const SystemParams &params);
  ShapeSystem(SystemKey key, SystemParams params, Parts parts);

  SystemKey key_;
  SystemParams params_;
  LinguisticVariable input_;
  OutputVariable output_;
  RuleBase rules_;
};

/// The four component systems plus engine settings. Immutable once built.
class ShapeSystemRegistry {
 public:
  /// `params` is indexed by SystemKey. Throws ValidationError with the
  /// diagnostics of every system.
  ShapeSystemRegistry(std::array<SystemParams, 4> params, EngineSettings engine);

  const ShapeSystem &system(SystemKey key) const noexcept { return systems_[static_cast<std::size_t>(key)]; }
  const EngineSettings &engine() const noexcept { return engine_; }
  std::size_t rule_count() const noexcept;
  std::array<SystemParams, 4> params() const;

  friend bool operator==(const ShapeSystemRegistry &a, const ShapeSystemRegistry &b) {
    return a.params() == b.params() && a.engine_ == b.engine_;
  }

 private:
  std::vector<ShapeSystem> systems_;
  EngineSettings engine_;
};

/// Registry built from the shipped default configuration.
const ShapeSystemRegistry &default_registry();

struct ShapeDescription {
  std::string measurement_id;
  ComponentKind kind;
  double selected_param;
  double crisp_shape;
  CentroidInterval centroid_interval;
  bool clamped = false;  // selected_param exceeded the universe and was clamped
  std::vector<LabeledPercent> percentages;
};

ShapeDescription classify(const Measurement &m, const ShapeSystemRegistry &reg);

/// Highest-percentage label; the earliest term wins ties.
const std::string &dominant_label(const ShapeDescription &d);

struct CalibrationRow {
  Measurement measurement;
  std::string expected_label;
};

struct CalibrationOptions {
  int radius = 8;     // offsets span [-radius, radius] steps around each peak
  double step = 1.0;  // universe units per offset step
};

struct SystemCalibration {
  SystemKey key;
  int agreed = 0;
  int total = 0;
  std::vector<double> offsets;  // applied to input and output peaks alike
  std::size_t candidates = 0;   // monotone peak vectors scored
};

struct CalibrationReport {
  ShapeSystemRegistry registry;
  int agreed = 0;
  int total = 0;
  std::vector<SystemCalibration> systems;  // only systems that had rows
};

/// Grid search over monotone peak perturbations, maximizing dominant-label
/// agreement per system. Ties go to the smallest total offset, then to the
/// first candidate in lexicographic offset order, so the unperturbed
/// defaults win any tie they take part in.
/// Throws Error(InvalidRow) on empty input or an expected label outside the
/// component's vocabulary.
CalibrationReport calibrate(const ShapeSystemRegistry &reg, const std::vector<CalibrationRow> &rows,
                            const CalibrationOptions &options = {});

}  // namespace fuzzyshape
