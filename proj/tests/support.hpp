#pragma once

// Shared test helpers: seeded generators, brute-force oracles that never call
// the inference code they check, and small file utilities.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "face_shape.hpp"
#include "inference.hpp"

namespace fzs_test {

using namespace fuzzyshape;

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64 &g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline int uniform_int(std::mt19937_64 &g, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }

// Plain triangle with feet inside [lo, hi] and both sides at least `min_side` wide.
inline TriangularMF random_triangle(std::mt19937_64 &g, double lo, double hi, double min_side = 2.0) {
  const double b = uniform(g, lo + min_side, hi - min_side);
  const double a = uniform(g, lo, b - min_side);
  const double c = uniform(g, b + min_side, hi);
  return TriangularMF(a, b, c);
}

// Random fired consequents: one or two terms, strengths in (0.05, 1].
// Terms come either from the shipped systems or are fresh random triangles.
inline std::vector<FiredConsequent> random_firing(std::mt19937_64 &g, const OutputVariable &out,
                                                  double fou_inset, double lower_height, bool configured_terms) {
  std::vector<FiredConsequent> fired;
  const int count = uniform_int(g, 1, 2);
  for (int k = 0; k < count; ++k) {
    const double s = uniform(g, 0.05, 1.0);
    if (configured_terms) {
      const auto &t = out.terms()[static_cast<std::size_t>(uniform_int(g, 0, 4))];
      fired.push_back({t.label, s, IntervalType2MF::with_inset(t.mf.upper(), fou_inset, lower_height)});
    } else {
      const auto u = out.universe();
      fired.push_back(
          {"t" + std::to_string(k), s, IntervalType2MF::with_inset(random_triangle(g, u.lo, u.hi), fou_inset, lower_height)});
    }
  }
  return fired;
}

// Independent hand evaluation of a triangle, written from the textbook formula.
inline double tri(double a, double b, double c, bool cl, bool cr, double x) {
  if (cl && x <= b) return 1.0;
  if (cr && x >= b) return 1.0;
  if (x <= a || x >= c) return (x == b) ? 1.0 : 0.0;
  if (x <= b) return (x - a) / (b - a);
  return (c - x) / (c - b);
}

inline double tri(const TriangularMF &m, double x) { return tri(m.a(), m.b(), m.c(), m.clamp_left(), m.clamp_right(), x); }

// Pointwise scaled-max envelope, evaluated directly from the term definitions.
inline double envelope_upper(const std::vector<FiredConsequent> &fired, double x) {
  double v = 0.0;
  for (const auto &f : fired) v = std::max(v, f.strength * tri(f.term.upper(), x));
  return v;
}

inline double envelope_lower(const std::vector<FiredConsequent> &fired, double x) {
  double v = 0.0;
  for (const auto &f : fired) v = std::max(v, f.strength * f.term.lower_height() * tri(f.term.lower(), x));
  return v;
}

// Continuous centroid of x -> mu(x) over [lo, hi] by the midpoint rule with
// `samples` cells.
template <typename Mu>
double reference_centroid(Mu mu, double lo, double hi, std::size_t samples = 1'000'000) {
  const double h = (hi - lo) / static_cast<double>(samples);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = lo + (static_cast<double>(i) + 0.5) * h;
    const double m = mu(x);
    num += x * m;
    den += m;
  }
  return num / den;
}

struct Interval {
  double left = std::numeric_limits<double>::infinity();
  double right = -std::numeric_limits<double>::infinity();
};

// Extremes of the centroid over every embedded set whose membership at each
// sample is either its lower or its upper bound (2^n choices).
inline Interval enumerate_embedded_centroids(const std::vector<double> &xs, const std::vector<double> &lower,
                                             const std::vector<double> &upper) {
  const std::size_t n = xs.size();
  Interval out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double m = (mask >> i) & 1U ? upper[i] : lower[i];
      num += xs[i] * m;
      den += m;
    }
    if (den <= 0.0) continue;
    out.left = std::min(out.left, num / den);
    out.right = std::max(out.right, num / den);
  }
  return out;
}

// The same extremes by sweeping every switch point: upper weights on one side,
// lower on the other.
inline Interval sweep_switch_points(const std::vector<double> &xs, const std::vector<double> &lower,
                                    const std::vector<double> &upper) {
  const std::size_t n = xs.size();
  Interval out;
  for (std::size_t k = 0; k <= n; ++k) {
    double nl = 0.0, dl = 0.0, nr = 0.0, dr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ml = i < k ? upper[i] : lower[i];
      const double mr = i < k ? lower[i] : upper[i];
      nl += xs[i] * ml;
      dl += ml;
      nr += xs[i] * mr;
      dr += mr;
    }
    if (dl > 0.0) out.left = std::min(out.left, nl / dl);
    if (dr > 0.0) out.right = std::max(out.right, nr / dr);
  }
  return out;
}

inline std::vector<double> grid(double lo, double hi, std::size_t n) {
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(n - 1);
  return xs;
}

inline std::filesystem::path data_dir() { return FZS_DATA_DIR; }

// Fresh empty directory under the system temp dir, unique per name.
inline std::filesystem::path scratch_dir(const std::string &name) {
  auto dir = std::filesystem::temp_directory_path() / ("fuzzyshape_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_file(const std::filesystem::path &p, const std::string &text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

inline std::vector<std::string> lines_of(const std::string &text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

inline std::size_t label_index(const std::vector<std::string> &labels, const std::string &label) {
  return static_cast<std::size_t>(std::find(labels.begin(), labels.end(), label) - labels.begin());
}

}  // namespace fzs_test
