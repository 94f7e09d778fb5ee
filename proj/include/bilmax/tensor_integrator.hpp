#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "bilmax/geometry.hpp"
#include "bilmax/sampling.hpp"

namespace bilmax {

// Running integrals of a piecewise-constant g:
//   G(z)  = int_{-inf}^z g,     GG(z) = int_{-inf}^z G.
// G is piecewise linear and GG piecewise quadratic, so both evaluate exactly.
class CumulativeIntegrals {
 public:
  explicit CumulativeIntegrals(const SampledFunction& g);

  struct Node {
    double z;
    double gg;
    std::ptrdiff_t cell;  // clamped to [-1, n]
  };

  Node node(double z) const;
  double G(double z) const { return G_in(cell_of(z), z); }
  // int_a^b g.
  double integral(double a, double b) const { return G(b) - G(a); }
  // Mean of G over the segment between two nodes (either order).
  double mean_G(const Node& a, const Node& b) const;

  const Grid1D& grid() const { return grid_; }

 private:
  std::ptrdiff_t cell_of(double z) const;
  double G_in(std::ptrdiff_t k, double z) const;
  double boundary(std::ptrdiff_t k) const { return boundaries_[static_cast<std::size_t>(k)]; }

  Grid1D grid_;
  std::ptrdiff_t n_;
  double inv_h_;
  std::vector<double> g_;
  std::vector<double> boundaries_;  // n + 1 cell edges
  std::vector<double> G_;           // at cell edges
  std::vector<double> GG_;          // at cell edges
};

struct RectangleShape {
  double angle;
  double length;
  double width;
};

// Integration plan for one rectangle shape, relative to a center whose
// distance from the left edge of its cell is `phase`. The y-range is cut at
// every cell edge and every corner, so on each segment f is constant and both
// vertical-slice bounds are linear; the z-integral is G(top) - G(bottom) and
// the y-integral of G along a linear edge is an exact GG difference.
class RectangleStencil {
 public:
  RectangleStencil(const RectangleShape& shape, double h, double phase);

  // int_R f(y) g(z) for R centered at (x, x) with x in cell `cell`.
  double integral(const SampledFunction& f, const CumulativeIntegrals& g, double x,
                  std::ptrdiff_t cell) const;

  const RectangleShape& shape() const { return shape_; }
  std::size_t segments() const { return dy_.size(); }

 private:
  RectangleShape shape_;
  std::vector<double> top_;     // z - x at each node
  std::vector<double> bottom_;  // z - x at each node
  std::vector<double> dy_;
  std::vector<std::ptrdiff_t> offset_;  // f cell of each segment, relative to the center cell
};

// Exact integral over P_{x,l,w} of f(y) g(z) for one fixed half-height w, as
// Q(x + l) - Q(x - l) with Q(y) = int_{-inf}^y f(t) [G(t + w) - G(t - w)] dt
// tabulated at cell edges. Holds references; must not outlive f or g.
class ParallelogramTable {
 public:
  ParallelogramTable(const SampledFunction& f, const CumulativeIntegrals& g, double w);

  double integral(double x, double l) const { return std::max(0.0, Q(x + l) - Q(x - l)); }
  double half_height() const { return w_; }

 private:
  double Q(double y) const;
  // int_a^b [G(t + w) - G(t - w)] dt for a, b inside one cell.
  double window_integral(double a, double b) const;

  const SampledFunction* f_;
  const CumulativeIntegrals* g_;
  double w_;
  std::vector<double> Q_;
};

// Exact averages of F = f (x) g over regions, for piecewise-constant f and g.
class TensorIntegrator {
 public:
  TensorIntegrator(const SampledFunction& f, const SampledFunction& g);

  double rectangle_integral(const Rectangle& r) const;
  double rectangle_average(const Rectangle& r) const { return rectangle_integral(r) / r.area(); }

  // Rectangle centered at grid point i, using the same plan the maximal
  // operators use, so results agree bit for bit.
  double rectangle_average_at(const RectangleShape& shape, std::size_t i) const;

  double parallelogram_integral(const Parallelogram& p) const;
  double parallelogram_average(const Parallelogram& p) const {
    return parallelogram_integral(p) / p.area();
  }

  double average(const Region& region) const;

  const SampledFunction& f() const { return f_; }
  const CumulativeIntegrals& g_integrals() const { return G_; }

 private:
  SampledFunction f_;
  CumulativeIntegrals G_;
};

}  // namespace bilmax
