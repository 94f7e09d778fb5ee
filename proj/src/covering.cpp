#include "bilmax/covering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

#include "bilmax/parallel.hpp"

namespace bilmax {

LevelSet superlevel_measure(const MaximalField& field, double lambda, LevelRule rule) {
  if (!(lambda > 0.0)) throw std::invalid_argument("superlevel_measure: lambda must be > 0");
  LevelSet out;
  out.lambda = lambda;
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const double v = field.values[i];
    if (rule == LevelRule::strict ? v > lambda : v >= lambda) out.cells.push_back(i);
  }
  out.measure = static_cast<double>(out.cells.size()) * field.grid.h();
  return out;
}

std::vector<std::size_t> vitali_select_indices(std::span<const Interval> intervals) {
  for (const auto& I : intervals) {
    if (!(I.measure() > 0.0)) throw std::invalid_argument("vitali_select: intervals need positive length");
  }
  std::vector<std::size_t> order(intervals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& A = intervals[a];
    const auto& B = intervals[b];
    if (A.measure() != B.measure()) return A.measure() > B.measure();
    return A.lo < B.lo;
  });
  std::vector<std::size_t> kept;
  for (std::size_t idx : order) {
    const auto& I = intervals[idx];
    const bool free = std::none_of(kept.begin(), kept.end(),
                                   [&](std::size_t k) { return intervals[k].overlaps(I); });
    if (free) kept.push_back(idx);
  }
  return kept;
}

std::vector<Interval> vitali_select(std::span<const Interval> intervals) {
  std::vector<Interval> out;
  for (std::size_t i : vitali_select_indices(intervals)) out.push_back(intervals[i]);
  return out;
}

double union_measure(std::span<const Interval> intervals) {
  std::vector<Interval> v(intervals.begin(), intervals.end());
  std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double total = 0.0;
  bool open = false;
  Interval cur{};
  for (const auto& I : v) {
    if (!(I.hi > I.lo)) continue;
    if (open && I.lo <= cur.hi) {
      cur.hi = std::max(cur.hi, I.hi);
    } else {
      if (open) total += cur.measure();
      cur = I;
      open = true;
    }
  }
  if (open) total += cur.measure();
  return total;
}

CoveredFamily build_covered_family(const MaximalField& field, double lambda) {
  if (field.tag.kind != OperatorKind::m_delta && field.tag.kind != OperatorKind::m_lac) {
    throw std::invalid_argument("build_covered_family: field has no rectangle witnesses");
  }
  if (field.witness.size() != field.values.size()) {
    throw std::invalid_argument("build_covered_family: missing witnesses");
  }
  const auto level = superlevel_measure(field, lambda);
  CoveredFamily family;
  family.lambda = lambda;
  std::set<std::tuple<double, double, double, double>> seen;
  for (std::size_t i : level.cells) {
    const auto& w = field.witness[i];
    const double x = field.grid.point(i);
    if (!seen.emplace(x, w.angle, w.length, w.width).second) continue;
    const Rectangle r(x, w.angle, w.length, w.width);
    family.items.push_back({diagonal_chord(r), r, field.values[i]});
  }
  return family;
}

CoveredFamily vitali_subfamily(const CoveredFamily& family) {
  std::vector<Interval> intervals;
  for (const auto& item : family.items) intervals.push_back(item.interval);
  auto kept = vitali_select_indices(intervals);
  std::sort(kept.begin(), kept.end());
  CoveredFamily out;
  out.lambda = family.lambda;
  for (std::size_t i : kept) out.items.push_back(family.items[i]);
  return out;
}

SplitFamilies split_families(const CoveredFamily& family) {
  SplitFamilies s;
  for (std::size_t j = 0; j < family.items.size(); ++j) {
    const auto& item = family.items[j];
    if (item.interval.measure() <= kSplitRatio * item.rectangle.area()) {
      s.l1.push_back(j);
    } else {
      s.l2.push_back(j);
    }
  }
  return s;
}

namespace {

// Solutions y of |alpha y + beta| <= bound, intersected into [lo, hi].
void clip_slab(double alpha, double beta, double bound, double& lo, double& hi) {
  if (alpha == 0.0) {
    if (std::abs(beta) > bound) hi = lo - 1.0;
    return;
  }
  double a = (-bound - beta) / alpha;
  double b = (bound - beta) / alpha;
  if (a > b) std::swap(a, b);
  lo = std::max(lo, a);
  hi = std::min(hi, b);
}

}  // namespace

double overlap_function_norm(std::span<const Rectangle> rects, double spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("overlap norm: spacing must be > 0");
  if (rects.empty()) return 0.0;

  double ymin = INFINITY, ymax = -INFINITY, zmin = INFINITY, zmax = -INFINITY;
  for (const auto& r : rects) {
    for (const auto& p : r.corners()) {
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
      zmin = std::min(zmin, p.z);
      zmax = std::max(zmax, p.z);
    }
  }
  const auto cols = static_cast<std::size_t>(std::ceil((ymax - ymin) / spacing)) + 1;
  const auto rows = static_cast<std::size_t>(std::ceil((zmax - zmin) / spacing)) + 1;

  std::vector<std::uint64_t> row_sums(rows, 0);
  parallel_for(rows, 16, [&](std::size_t begin, std::size_t end) {
    std::vector<std::int64_t> diff(cols + 1);
    for (std::size_t row = begin; row < end; ++row) {
      std::fill(diff.begin(), diff.end(), 0);
      const double z = zmin + (static_cast<double>(row) + 0.5) * spacing;
      for (const auto& r : rects) {
        const auto& [u, v] = r.axes();
        const double dz = z - r.center();
        // s = (y - x) u_y + dz u_z and t = (y - x) v_y + dz v_z.
        double lo = -INFINITY, hi = INFINITY;
        clip_slab(u.y, dz * u.z - r.center() * u.y, r.length() / 2, lo, hi);
        clip_slab(v.y, dz * v.z - r.center() * v.y, r.width() / 2, lo, hi);
        if (!(hi >= lo)) continue;
        const double c_lo = std::ceil((lo - ymin) / spacing - 0.5);
        const double c_hi = std::floor((hi - ymin) / spacing - 0.5);
        const double first = std::max(c_lo, 0.0);
        const double last = std::min(c_hi, static_cast<double>(cols) - 1.0);
        if (first > last) continue;
        ++diff[static_cast<std::size_t>(first)];
        --diff[static_cast<std::size_t>(last) + 1];
      }
      std::int64_t count = 0;
      std::uint64_t sq = 0;
      for (std::size_t c = 0; c < cols; ++c) {
        count += diff[c];
        sq += static_cast<std::uint64_t>(count * count);
      }
      row_sums[row] = sq;
    }
  });
  const std::uint64_t total = std::accumulate(row_sums.begin(), row_sums.end(), std::uint64_t{0});
  return std::sqrt(static_cast<double>(total)) * spacing;
}

OverlapResult overlap_l2_norm(std::span<const Rectangle> rects, double spacing) {
  if (rects.empty()) throw std::invalid_argument("overlap_l2_norm: no rectangles");
  const double delta = rects.front().width();
  for (const auto& r : rects) {
    if (std::abs(r.width() - delta) > 1e-12 * delta || std::abs(r.length() - 1.0) > 1e-12) {
      throw std::invalid_argument("overlap_l2_norm: rectangles must all be 1 x delta");
    }
  }
  if (!(delta < 1.0)) throw std::invalid_argument("overlap_l2_norm: need delta < 1");
  if (spacing > delta / 8 * (1.0 + 1e-12)) {
    throw std::invalid_argument("overlap_l2_norm: lattice too coarse (spacing > delta/8)");
  }
  OverlapResult out;
  out.n_rects = rects.size();
  out.delta = delta;
  out.spacing = spacing;
  for (const auto& r : rects) out.sum_area += r.area();
  out.overlap_l2 = overlap_function_norm(rects, spacing);
  out.cordoba_ratio = out.overlap_l2 / (std::sqrt(std::log(1.0 / delta)) * std::sqrt(out.sum_area));
  return out;
}

std::vector<Rectangle> rectangle_fan(double center, const DirectionSet& omega, double delta) {
  std::vector<Rectangle> out;
  for (double a : omega.angles()) out.emplace_back(center, a, 1.0, delta);
  return out;
}

CoveringChain covering_chain(const CoveredFamily& family, const SplitFamilies& split,
                             const SampledFunction& f, const SampledFunction& g, double spacing) {
  CoveringChain c;
  c.lambda = family.lambda;
  if (!(c.lambda > 0.0)) throw std::invalid_argument("covering_chain: family has no lambda");
  std::vector<Rectangle> rects;
  double mass = 0.0;
  for (std::size_t j : split.l1) {
    const auto& item = family.items.at(j);
    c.chord_sum += item.interval.measure();
    mass += item.average * item.rectangle.area();
    rects.push_back(item.rectangle);
  }
  c.l1_count = rects.size();
  c.pairing_bound = kSplitRatio / c.lambda * mass;
  c.overlap_l2 = overlap_function_norm(rects, spacing);
  c.tensor_l2 = lp_norm(f, 2.0) * lp_norm(g, 2.0);
  c.cauchy_schwarz_bound = kSplitRatio / c.lambda * c.overlap_l2 * c.tensor_l2;
  return c;
}

}  // namespace bilmax
