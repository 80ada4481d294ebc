#include "linguistic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

namespace fuzzyshape {

namespace {

void check_universe(const std::string &name, Universe u) {
  if (!std::isfinite(u.lo) || !std::isfinite(u.hi) || !(u.lo < u.hi)) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("variable '{}' has an empty or non-finite universe [{}, {}]", name, u.lo, u.hi));
  }
}

template <typename Terms>
std::optional<std::size_t> find_label(const Terms &terms, std::string_view label) {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].label == label) return i;
  }
  return std::nullopt;
}

const TriangularMF &principal(const InputTerm &t) { return t.mf; }
const TriangularMF &principal(const OutputTerm &t) { return t.mf.upper(); }

// Between two consecutive knots every triangle is linear and either strictly
// positive or identically zero, so probing each knot and each midpoint finds
// every uncovered region exactly.
template <typename Terms>
void find_gaps(const std::string &name, Universe u, const Terms &terms, std::vector<Diagnostic> &out) {
  std::vector<double> knots{u.lo, u.hi};
  for (const auto &t : terms) {
    const auto &mf = principal(t);
    for (double k : {mf.a(), mf.b(), mf.c()}) {
      if (k > u.lo && k < u.hi) knots.push_back(k);
    }
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  auto covered = [&](double x) {
    return std::any_of(terms.begin(), terms.end(), [&](const auto &t) { return principal(t)(x) > 0.0; });
  };

  // Probes alternate: knot 0, segment 0, knot 1, ..., knot n-1.
  std::optional<double> gap_start;
  double gap_end = 0.0;
  auto flush = [&] {
    if (gap_start) {
      out.push_back({DiagnosticKind::CoverageGap,
                     fmt::format("variable '{}' has no term with positive membership on [{}, {}]", name,
                                 *gap_start, gap_end),
                     *gap_start, gap_end});
      gap_start.reset();
    }
  };
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!covered(knots[i])) {
      if (!gap_start) gap_start = knots[i];
      gap_end = knots[i];
    } else {
      flush();
    }
    if (i + 1 < knots.size()) {
      const double mid = 0.5 * (knots[i] + knots[i + 1]);
      if (!covered(mid)) {
        if (!gap_start) gap_start = knots[i];
        gap_end = knots[i + 1];
      } else {
        flush();
      }
    }
  }
  flush();
}

template <typename Terms>
std::vector<Diagnostic> validate_terms(const std::string &name, Universe u, const Terms &terms) {
  std::vector<Diagnostic> out;
  for (std::size_t i = 1; i < terms.size(); ++i) {
    const double prev = principal(terms[i - 1]).peak();
    const double cur = principal(terms[i]).peak();
    if (!(cur > prev)) {
      out.push_back({DiagnosticKind::NonMonotonePeaks,
                     fmt::format("variable '{}': term '{}' peaks at {} after term '{}' at {}", name,
                                 terms[i].label, cur, terms[i - 1].label, prev)});
    }
  }
  std::set<std::string_view> seen;
  std::set<std::string_view> reported;
  for (const auto &t : terms) {
    if (!seen.insert(t.label).second && reported.insert(t.label).second) {
      out.push_back({DiagnosticKind::DuplicateLabel,
                     fmt::format("variable '{}': label '{}' appears more than once", name, t.label)});
    }
  }
  find_gaps(name, u, terms, out);
  return out;
}

std::string join_messages(const std::vector<Diagnostic> &diagnostics) {
  std::string msg = fmt::format("validation failed with {} diagnostic(s)", diagnostics.size());
  for (const auto &d : diagnostics) msg += fmt::format("\n  [{}] {}", to_string(d.kind), d.message);
  return msg;
}

}  // namespace

LinguisticVariable::LinguisticVariable(std::string name, Universe universe, std::vector<InputTerm> terms)
    : name_(std::move(name)), universe_(universe), terms_(std::move(terms)) {
  check_universe(name_, universe_);
}

std::optional<std::size_t> LinguisticVariable::index_of(std::string_view label) const {
  return find_label(terms_, label);
}

OutputVariable::OutputVariable(std::string name, Universe universe, std::vector<OutputTerm> terms)
    : name_(std::move(name)), universe_(universe), terms_(std::move(terms)) {
  check_universe(name_, universe_);
}

std::optional<std::size_t> OutputVariable::index_of(std::string_view label) const {
  return find_label(terms_, label);
}

FiringVector fuzzify(const LinguisticVariable &var, double x) {
  const Universe &u = var.universe();
  if (!(x >= u.lo && x <= u.hi)) {
    throw Error(ErrorCode::OutOfUniverse,
                fmt::format("value {} outside universe [{}, {}] of variable '{}'", x, u.lo, u.hi, var.name()));
  }
  FiringVector fv;
  for (const auto &term : var.terms()) {
    const double degree = term.mf(x);
    if (degree > 0.0) fv.push_back({term.label, degree});
  }
  return fv;
}

const char *to_string(DiagnosticKind kind) noexcept {
  switch (kind) {
    case DiagnosticKind::CoverageGap: return "CoverageGap";
    case DiagnosticKind::NonMonotonePeaks: return "NonMonotonePeaks";
    case DiagnosticKind::PeakOutsideUniverse: return "PeakOutsideUniverse";
    case DiagnosticKind::DuplicateLabel: return "DuplicateLabel";
    case DiagnosticKind::WrongTermCount: return "WrongTermCount";
    case DiagnosticKind::LabelMismatch: return "LabelMismatch";
    case DiagnosticKind::InvalidParameter: return "InvalidParameter";
  }
  return "Unknown";
}

std::vector<Diagnostic> validate_partition(const LinguisticVariable &var) {
  return validate_terms(var.name(), var.universe(), var.terms());
}

std::vector<Diagnostic> validate_partition(const OutputVariable &var) {
  return validate_terms(var.name(), var.universe(), var.terms());
}

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : Error(ErrorCode::ValidationError, join_messages(diagnostics)), diagnostics_(std::move(diagnostics)) {}

RuleBase::RuleBase(std::vector<Rule> rules, const LinguisticVariable &input, const OutputVariable &output)
    : rules_(std::move(rules)) {
  const auto &in = input.terms();
  const auto &out = output.terms();
  if (in.size() != out.size() || rules_.size() != in.size()) {
    throw Error(ErrorCode::InvalidRuleBase,
                fmt::format("rule base needs one rule per term: {} rules, {} input terms, {} output terms",
                            rules_.size(), in.size(), out.size()));
  }
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    if (rules_[i].antecedent != in[i].label || rules_[i].consequent != out[i].label) {
      throw Error(ErrorCode::InvalidRuleBase,
                  fmt::format("rule {} ('{}' -> '{}') breaks the order-preserving map; expected '{}' -> '{}'",
                              i + 1, rules_[i].antecedent, rules_[i].consequent, in[i].label, out[i].label));
    }
  }
}

std::optional<std::string_view> RuleBase::consequent_of(std::string_view antecedent) const {
  for (const auto &r : rules_) {
    if (r.antecedent == antecedent) return std::string_view(r.consequent);
  }
  return std::nullopt;
}

std::vector<Diagnostic> check_peaks(Universe universe, std::span<const double> peaks, std::string_view owner) {
  std::vector<Diagnostic> out;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    if (!std::isfinite(peaks[i]) || peaks[i] < universe.lo || peaks[i] > universe.hi) {
      out.push_back({DiagnosticKind::PeakOutsideUniverse,
                     fmt::format("{}: peak {} = {} outside universe [{}, {}]", owner, i + 1, peaks[i],
                                 universe.lo, universe.hi)});
    }
    if (i > 0 && !(peaks[i] > peaks[i - 1])) {
      out.push_back({DiagnosticKind::NonMonotonePeaks,
                     fmt::format("{}: peak {} = {} does not exceed peak {} = {}", owner, i + 1, peaks[i], i,
                                 peaks[i - 1])});
    }
  }
  return out;
}

std::vector<TriangularMF> ruspini_triangles(Universe universe, std::span<const double> peaks) {
  if (peaks.empty()) {
    throw Error(ErrorCode::InvalidArgument, "a partition needs at least one peak");
  }
  if (auto diagnostics = check_peaks(universe, peaks, "partition"); !diagnostics.empty()) {
    throw ValidationError(std::move(diagnostics));
  }
  const std::size_t n = peaks.size();
  std::vector<TriangularMF> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i == 0 ? universe.lo : peaks[i - 1];
    const double c = i + 1 == n ? universe.hi : peaks[i + 1];
    out.emplace_back(a, peaks[i], c, i == 0, i + 1 == n);
  }
  return out;
}

}  // namespace fuzzyshape
