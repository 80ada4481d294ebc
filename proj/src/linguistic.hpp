#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "fuzzy_sets.hpp"

namespace fuzzyshape {

struct Universe {
  double lo;
  double hi;

  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  friend bool operator==(const Universe &, const Universe &) = default;
};

struct InputTerm {
  std::string label;
  TriangularMF mf;
  friend bool operator==(const InputTerm &, const InputTerm &) = default;
};

struct OutputTerm {
  std::string label;
  IntervalType2MF mf;
  friend bool operator==(const OutputTerm &, const OutputTerm &) = default;
};

/// Named type-1 linguistic variable. Construction only checks the universe;
/// partition quality is reported by validate_partition.
class LinguisticVariable {
 public:
  LinguisticVariable(std::string name, Universe universe, std::vector<InputTerm> terms);

  const std::string &name() const noexcept { return name_; }
  const Universe &universe() const noexcept { return universe_; }
  const std::vector<InputTerm> &terms() const noexcept { return terms_; }
  std::optional<std::size_t> index_of(std::string_view label) const;

  friend bool operator==(const LinguisticVariable &, const LinguisticVariable &) = default;

 private:
  std::string name_;
  Universe universe_;
  std::vector<InputTerm> terms_;
};

/// Output variable whose terms are interval type-2 sets. Ordering, coverage
/// and uniqueness are judged on the upper membership functions.
class OutputVariable {
 public:
  OutputVariable(std::string name, Universe universe, std::vector<OutputTerm> terms);

  const std::string &name() const noexcept { return name_; }
  const Universe &universe() const noexcept { return universe_; }
  const std::vector<OutputTerm> &terms() const noexcept { return terms_; }
  std::optional<std::size_t> index_of(std::string_view label) const;

  friend bool operator==(const OutputVariable &, const OutputVariable &) = default;

 private:
  std::string name_;
  Universe universe_;
  std::vector<OutputTerm> terms_;
};

struct Firing {
  std::string label;
  double strength;
};

/// Nonzero term activations in term order.
using FiringVector = std::vector<Firing>;

/// Throws Error(OutOfUniverse) when x lies outside the variable's universe.
FiringVector fuzzify(const LinguisticVariable &var, double x);

enum class DiagnosticKind {
  CoverageGap,
  NonMonotonePeaks,
  PeakOutsideUniverse,
  DuplicateLabel,
  WrongTermCount,
  LabelMismatch,
  InvalidParameter,
};

const char *to_string(DiagnosticKind kind) noexcept;

struct Diagnostic {
  DiagnosticKind kind;
  std::string message;
  // Bounds of the uncovered interval for CoverageGap, unused otherwise.
  double gap_lo = 0.0;
  double gap_hi = 0.0;
};

std::vector<Diagnostic> validate_partition(const LinguisticVariable &var);
std::vector<Diagnostic> validate_partition(const OutputVariable &var);

/// Thrown when a configuration or partition fails validation. Carries every
/// diagnostic found, not just the first.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics);

  const std::vector<Diagnostic> &diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

struct Rule {
  std::string antecedent;
  std::string consequent;
  friend bool operator==(const Rule &, const Rule &) = default;
};

/// Single-antecedent rules forming an order-preserving bijection between the
/// input terms and the output terms (i-th input term -> i-th output term).
class RuleBase {
 public:
  /// Throws Error(InvalidRuleBase) if `rules` is not such a bijection.
  RuleBase(std::vector<Rule> rules, const LinguisticVariable &input, const OutputVariable &output);

  const std::vector<Rule> &rules() const noexcept { return rules_; }
  std::optional<std::string_view> consequent_of(std::string_view antecedent) const;

  friend bool operator==(const RuleBase &, const RuleBase &) = default;

 private:
  std::vector<Rule> rules_;
};

/// Ruspini partition from strictly increasing peaks: each interior term rises
/// from the previous peak and falls to the next; the first and last terms are
/// shouldered toward the universe bounds. Throws ValidationError on peaks
/// that are not strictly increasing inside the universe.
std::vector<TriangularMF> ruspini_triangles(Universe universe, std::span<const double> peaks);

std::vector<Diagnostic> check_peaks(Universe universe, std::span<const double> peaks, std::string_view owner);

}  // namespace fuzzyshape
