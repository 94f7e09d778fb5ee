#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "bilmax/geometry.hpp"
#include "bilmax/sampling.hpp"

namespace oracle {

// (1/2r) int_{x-r}^{x+r} f straight from the cell values.
inline double window_average(const bilmax::SampledFunction& f, double x, double r) {
  const auto& grid = f.grid();
  double s = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double lo = std::max(grid.cell_left(k), x - r);
    const double hi = std::min(grid.cell_left(k + 1), x + r);
    if (hi > lo) s += f[k] * (hi - lo);
  }
  return s / (2 * r);
}

// Brute-force M_1 over a dense linear radius grid.
inline double dense_m1(const bilmax::SampledFunction& f, double x, double r_max, int steps) {
  double best = 0.0;
  for (int k = 1; k <= steps; ++k) best = std::max(best, window_average(f, x, r_max * k / steps));
  return best;
}

inline bool pairwise_disjoint(const std::vector<bilmax::Interval>& v) {
  for (std::size_t a = 0; a < v.size(); ++a) {
    for (std::size_t b = a + 1; b < v.size(); ++b) {
      if (std::max(v[a].lo, v[b].lo) < std::min(v[a].hi, v[b].hi)) return false;
    }
  }
  return true;
}

// Best union measure of any pairwise-disjoint subfamily, by enumeration.
inline double optimal_packing(const std::vector<bilmax::Interval>& v) {
  double best = 0.0;
  const std::size_t n = v.size();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<bilmax::Interval> pick;
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (mask & (1u << k)) {
        pick.push_back(v[k]);
        total += v[k].measure();
      }
    }
    if (total > best && pairwise_disjoint(pick)) best = total;
  }
  return best;
}

}  // namespace oracle
