#pragma once

#include <string>
#include <vector>

#include "fuzzy_sets.hpp"
#include "linguistic.hpp"

namespace fuzzyshape {

struct FiredConsequent {
  std::string label;
  double strength;
  IntervalType2MF term;
};

/// Maps each firing to its consequent term through the rule base.
/// Throws Error(UnknownLabel) for a firing label with no rule or a consequent
/// missing from `out`.
std::vector<FiredConsequent> fire(const RuleBase &rules, const FiringVector &fv, const OutputVariable &out);

/// Uniformly sampled post-inference set. Sample i sits at
/// lo + i * (hi - lo) / (resolution - 1).
class AggregatedSet {
 public:
  AggregatedSet(Universe universe, std::vector<double> lower_env, std::vector<double> upper_env);

  const Universe &universe() const noexcept { return universe_; }
  std::size_t resolution() const noexcept { return upper_.size(); }
  double x(std::size_t i) const noexcept;
  const std::vector<double> &lower_env() const noexcept { return lower_; }
  const std::vector<double> &upper_env() const noexcept { return upper_; }

 private:
  Universe universe_;
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// Product implication (each consequent scaled by its strength) followed by
/// max aggregation, for both the upper and the lower envelope.
AggregatedSet aggregate(const std::vector<FiredConsequent> &fired, const OutputVariable &out, int resolution);

/// Weighted mean of the upper envelope. Throws Error(ZeroMass) on an empty set.
double centroid_t1(const AggregatedSet &set);

struct CentroidInterval {
  double left;
  double right;
};

/// Karnik-Mendel centroid interval of the interval type-2 aggregate.
/// Throws Error(ZeroMass), or Error(NonConvergence) when a switch point does
/// not settle within `resolution` iterations.
CentroidInterval km_type_reduce(const AggregatedSet &set);

/// Midpoint of the type-reduced interval.
double defuzzify(const AggregatedSet &set);

struct LabeledPercent {
  std::string label;
  double pct;
};

/// 100 x upper membership of each output term at `crisp`, zero entries
/// dropped, term order kept. Throws Error(OutOfUniverse).
std::vector<LabeledPercent> dom_percentages(const OutputVariable &out, double crisp);

}  // namespace fuzzyshape
