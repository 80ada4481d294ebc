#include "inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace fuzzyshape {

std::vector<FiredConsequent> fire(const RuleBase &rules, const FiringVector &fv, const OutputVariable &out) {
  std::vector<FiredConsequent> fired;
  fired.reserve(fv.size());
  for (const auto &f : fv) {
    auto consequent = rules.consequent_of(f.label);
    if (!consequent) {
      throw Error(ErrorCode::UnknownLabel, fmt::format("no rule has antecedent '{}'", f.label));
    }
    auto idx = out.index_of(*consequent);
    if (!idx) {
      throw Error(ErrorCode::UnknownLabel,
                  fmt::format("consequent '{}' is not a term of '{}'", *consequent, out.name()));
    }
    fired.push_back({std::string(*consequent), f.strength, out.terms()[*idx].mf});
  }
  return fired;
}

AggregatedSet::AggregatedSet(Universe universe, std::vector<double> lower_env, std::vector<double> upper_env)
    : universe_(universe), lower_(std::move(lower_env)), upper_(std::move(upper_env)) {
  if (lower_.size() != upper_.size() || upper_.size() < 2) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("aggregate envelopes need equal length >= 2 (got {} and {})", lower_.size(),
                            upper_.size()));
  }
  for (std::size_t i = 0; i < upper_.size(); ++i) {
    if (!(lower_[i] >= 0.0 && lower_[i] <= upper_[i] && upper_[i] <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  fmt::format("envelope sample {} violates 0 <= lower ({}) <= upper ({}) <= 1", i, lower_[i],
                              upper_[i]));
    }
  }
}

double AggregatedSet::x(std::size_t i) const noexcept {
  return universe_.lo + static_cast<double>(i) * (universe_.hi - universe_.lo) /
                            static_cast<double>(upper_.size() - 1);
}

AggregatedSet aggregate(const std::vector<FiredConsequent> &fired, const OutputVariable &out, int resolution) {
  if (fired.empty()) throw Error(ErrorCode::EmptyFiring, "no rule fired");
  if (resolution < 2) {
    throw Error(ErrorCode::InvalidArgument, fmt::format("resolution must be >= 2 (got {})", resolution));
  }
  const Universe u = out.universe();
  const auto n = static_cast<std::size_t>(resolution);
  std::vector<double> lower(n, 0.0);
  std::vector<double> upper(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = u.lo + static_cast<double>(i) * (u.hi - u.lo) / static_cast<double>(n - 1);
    for (const auto &f : fired) {
      const auto m = f.term(x);
      upper[i] = std::max(upper[i], f.strength * m.upper);
      lower[i] = std::max(lower[i], f.strength * m.lower);
    }
  }
  return AggregatedSet(u, std::move(lower), std::move(upper));
}

double centroid_t1(const AggregatedSet &set) {
  const auto &mu = set.upper_env();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    num += set.x(i) * mu[i];
    den += mu[i];
  }
  if (den <= 0.0) throw Error(ErrorCode::ZeroMass, "aggregated set has zero mass");
  return std::clamp(num / den, set.universe().lo, set.universe().hi);
}

namespace {

// Prefix sums make every candidate switch point an O(1) evaluation.
struct PrefixSums {
  std::vector<double> wu, xu, wl, xl;  // size n + 1

  explicit PrefixSums(const AggregatedSet &set) {
    const std::size_t n = set.resolution();
    wu.assign(n + 1, 0.0);
    xu.assign(n + 1, 0.0);
    wl.assign(n + 1, 0.0);
    xl.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = set.x(i);
      wu[i + 1] = wu[i] + set.upper_env()[i];
      xu[i + 1] = xu[i] + x * set.upper_env()[i];
      wl[i + 1] = wl[i] + set.lower_env()[i];
      xl[i + 1] = xl[i] + x * set.lower_env()[i];
    }
  }

  // Samples [0, k] weighted by `below`, (k, n) by the other envelope.
  double centroid(std::size_t k, bool upper_below) const {
    const std::size_t n = wu.size() - 1;
    const auto &wb = upper_below ? wu : wl;
    const auto &xb = upper_below ? xu : xl;
    const auto &wa = upper_below ? wl : wu;
    const auto &xa = upper_below ? xl : xu;
    const double num = xb[k + 1] + (xa[n] - xa[k + 1]);
    const double den = wb[k + 1] + (wa[n] - wa[k + 1]);
    if (den <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return num / den;
  }
};

// Index k with x_k <= c < x_{k+1}, clamped to [0, n-2].
std::size_t switch_index(const AggregatedSet &set, double c) {
  const std::size_t n = set.resolution();
  const Universe &u = set.universe();
  const double t = (c - u.lo) / (u.hi - u.lo) * static_cast<double>(n - 1);
  auto k = static_cast<std::ptrdiff_t>(std::floor(t));
  k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(n) - 2);
  // Correct for rounding in the inverse map.
  while (k > 0 && set.x(static_cast<std::size_t>(k)) > c) --k;
  while (k + 2 < static_cast<std::ptrdiff_t>(n) && set.x(static_cast<std::size_t>(k + 1)) <= c) ++k;
  return static_cast<std::size_t>(k);
}

double km_side(const AggregatedSet &set, const PrefixSums &ps, double start, bool left) {
  const std::size_t n = set.resolution();
  std::size_t k = switch_index(set, start);
  for (std::size_t iter = 0; iter <= n; ++iter) {
    double c = ps.centroid(k, left);
    // All-zero embedded set at this switch point; fall back to the upper
    // envelope, which is itself an embedded set with positive mass.
    if (std::isnan(c)) c = ps.xu.back() / ps.wu.back();
    const std::size_t next = switch_index(set, c);
    if (next == k) return c;
    k = next;
  }
  throw Error(ErrorCode::NonConvergence,
              fmt::format("Karnik-Mendel switch point did not settle within {} iterations", n));
}

}  // namespace

CentroidInterval km_type_reduce(const AggregatedSet &set) {
  const auto &lo = set.lower_env();
  const auto &up = set.upper_env();
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < up.size(); ++i) {
    const double w = 0.5 * (lo[i] + up[i]);
    num += set.x(i) * w;
    den += w;
  }
  if (den <= 0.0) throw Error(ErrorCode::ZeroMass, "aggregated set has zero mass");
  const double start = num / den;
  const PrefixSums ps(set);
  const Universe &u = set.universe();
  double left = std::clamp(km_side(set, ps, start, true), u.lo, u.hi);
  double right = std::clamp(km_side(set, ps, start, false), u.lo, u.hi);
  if (left > right) std::swap(left, right);  // only reachable through rounding on degenerate sets
  return {left, right};
}

double defuzzify(const AggregatedSet &set) {
  const auto interval = km_type_reduce(set);
  return 0.5 * (interval.left + interval.right);
}

std::vector<LabeledPercent> dom_percentages(const OutputVariable &out, double crisp) {
  const Universe &u = out.universe();
  if (!(crisp >= u.lo && crisp <= u.hi)) {
    throw Error(ErrorCode::OutOfUniverse,
                fmt::format("crisp value {} outside universe [{}, {}] of '{}'", crisp, u.lo, u.hi, out.name()));
  }
  std::vector<LabeledPercent> pcts;
  for (const auto &term : out.terms()) {
    const double dom = term.mf.upper()(crisp);
    if (dom > 0.0) pcts.push_back({term.label, 100.0 * dom});
  }
  return pcts;
}

}  // namespace fuzzyshape
