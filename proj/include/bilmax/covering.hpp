#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bilmax/geometry.hpp"
#include "bilmax/maximal.hpp"
#include "bilmax/sampling.hpp"

namespace bilmax {

enum class LevelRule {
  strict,     // value > lambda
  inclusive,  // value >= lambda
};

struct LevelSet {
  double lambda = 0.0;
  std::vector<std::size_t> cells;
  double measure = 0.0;  // cells.size() * h
};

LevelSet superlevel_measure(const MaximalField& field, double lambda, LevelRule rule = LevelRule::strict);

// Greedy Vitali selection: by decreasing length, ties by smaller left
// endpoint then input order; an interval is kept when its interior misses
// every interval kept so far. The union of the kept intervals is at least a
// third of the union of the input.
std::vector<Interval> vitali_select(std::span<const Interval> intervals);
std::vector<std::size_t> vitali_select_indices(std::span<const Interval> intervals);

// Lebesgue measure of a finite union.
double union_measure(std::span<const Interval> intervals);

struct CoveredFamily {
  struct Item {
    Interval interval;
    Rectangle rectangle;
    double average;
  };
  double lambda = 0.0;
  std::vector<Item> items;
};

// One item per level-set cell: the witness rectangle, its chord on D and its
// average. Needs a field with rectangle witnesses (m_delta or m_lac).
CoveredFamily build_covered_family(const MaximalField& field, double lambda);

// Keeps the Vitali-selected items of a family.
CoveredFamily vitali_subfamily(const CoveredFamily& family);

struct SplitFamilies {
  std::vector<std::size_t> l1;  // |I_j| <= 10 |R_j|
  std::vector<std::size_t> l2;
};

inline constexpr double kSplitRatio = 10.0;

SplitFamilies split_families(const CoveredFamily& family);

// L2 norm of the overlap function sum_j chi_{R_j}, by midpoint rasterization
// on a square lattice of the given spacing.
double overlap_function_norm(std::span<const Rectangle> rects, double spacing);

struct OverlapResult {
  std::size_t n_rects = 0;
  double delta = 0.0;
  double spacing = 0.0;
  double sum_area = 0.0;
  double overlap_l2 = 0.0;
  // overlap_l2 / (log(1/delta)^(1/2) (sum_area)^(1/2))
  double cordoba_ratio = 0.0;
};

// For 1 x delta rectangles; spacing must be <= delta / 8.
OverlapResult overlap_l2_norm(std::span<const Rectangle> rects, double spacing);

// 1 x delta rectangles through (x, x) for every direction of omega.
std::vector<Rectangle> rectangle_fan(double center, const DirectionSet& omega, double delta);

// Quantities of the estimate
//   sum_{L1} |I_j| <= (10 / lambda) sum_{L1} int_{R_j} F
//                  <= (10 / lambda) ||sum_{L1} chi_{R_j}||_2 ||f||_2 ||g||_2
struct CoveringChain {
  double lambda = 0.0;
  std::size_t l1_count = 0;
  double chord_sum = 0.0;
  double pairing_bound = 0.0;
  double overlap_l2 = 0.0;
  double tensor_l2 = 0.0;
  double cauchy_schwarz_bound = 0.0;
};

CoveringChain covering_chain(const CoveredFamily& family, const SplitFamilies& split,
                             const SampledFunction& f, const SampledFunction& g, double spacing);

}  // namespace bilmax
