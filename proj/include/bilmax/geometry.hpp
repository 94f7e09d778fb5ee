#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <variant>
#include <vector>

#include "bilmax/sampling.hpp"
#include "json.hpp"

namespace bilmax {

// A point (y, z) of the plane. The diagonal D is {y = z}.
struct Point {
  double y = 0.0;
  double z = 0.0;
};

// Angles are measured from D, in radians.
class DirectionSet {
 public:
  enum class Mode { separated, lacunary };

  // {k delta : 0 <= k <= floor(theta_max / delta)}.
  static DirectionSet separated(double delta, double theta_max = std::numbers::pi / 4);
  // {2^-j : 0 <= j <= j_max}.
  static DirectionSet lacunary(int j_max);

  // Closure under reflection across D (theta -> -theta).
  DirectionSet symmetrized() const;

  Mode mode() const { return mode_; }
  // Sorted ascending.
  const std::vector<double>& angles() const { return angles_; }
  std::size_t size() const { return angles_.size(); }
  double delta() const { return delta_; }
  int j_max() const { return j_max_; }
  double theta_max() const { return theta_max_; }

 private:
  DirectionSet(Mode mode, std::vector<double> angles, double delta, int j_max, double theta_max)
      : mode_(mode), angles_(std::move(angles)), delta_(delta), j_max_(j_max), theta_max_(theta_max) {}

  Mode mode_;
  std::vector<double> angles_;
  double delta_;
  int j_max_;
  double theta_max_;
};

DirectionSet build_direction_set(DirectionSet::Mode mode, double delta_or_jmax,
                                 double theta_max = std::numbers::pi / 4);

// Unit long-axis direction u and short-axis direction v of a rectangle whose
// long side makes angle theta with D. Built from cos/sin of theta alone so the
// reflection theta -> -theta swaps coordinates bit for bit.
struct Axes {
  Point u;
  Point v;
};
Axes axes_for_angle(double theta);

class Rectangle {
 public:
  Rectangle(double center, double angle, double length, double width);

  double center() const { return center_; }
  double angle() const { return angle_; }
  double length() const { return length_; }
  double width() const { return width_; }
  double area() const { return length_ * width_; }
  const Axes& axes() const { return axes_; }

  // Counter-clockwise corners.
  std::array<Point, 4> corners() const;
  bool contains(Point p) const;
  // Center + s u + t v for s in [-L/2, L/2], t in [-W/2, W/2].
  Point at(double s, double t) const;

  // Reflection across D.
  Rectangle reflected() const { return {center_, -angle_, length_, width_}; }

 private:
  double center_;
  double angle_;
  double length_;
  double width_;
  Axes axes_;
};

Rectangle rectangle_at(double x, double theta, double length, double width);

// P_{x,l,w}: vertices (x +- l, x +- l +- w); two vertical sides of length 2w.
class Parallelogram {
 public:
  Parallelogram(double center, double half_length, double half_height);

  double center() const { return center_; }
  double half_length() const { return half_length_; }
  double half_height() const { return half_height_; }
  double area() const { return 4.0 * half_length_ * half_height_; }

  // Counter-clockwise.
  std::array<Point, 4> vertices() const;
  bool contains(Point p) const;

 private:
  double center_;
  double half_length_;
  double half_height_;
};

Parallelogram parallelogram_at(double x, double l, double w);

// Smallest P_{x,l,w} containing the rectangle (inflated by a relative 1e-12).
Parallelogram enclosing_parallelogram(const Rectangle& r);

// An interval of diagonal coordinates: the point (x, x) has coordinate x.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double measure() const { return hi - lo; }
  // Arc length along D, sqrt(2) times the coordinate measure.
  double euclidean_length() const { return std::numbers::sqrt2 * measure(); }
  bool overlaps(const Interval& o) const { return std::max(lo, o.lo) < std::min(hi, o.hi); }
  bool operator==(const Interval&) const = default;
};

// R intersected with D, in diagonal coordinates. Euclidean chord length is
// min(L / cos theta, W / sin theta).
Interval diagonal_chord(const Rectangle& r);

// ceil(log2(Euclidean chord / width)); diagnostic dyadic index s_j.
int dyadic_index(const Rectangle& r);

using Region = std::variant<Rectangle, Parallelogram>;

double region_area(const Region& region);

struct QuadratureSpec {
  std::size_t n_long = 64;
  std::size_t n_short = 8;
  bool adaptive = true;
  double rel_tol = 1e-3;
  int max_refinements = 6;
};

// Midpoint rule on an n_long x n_short lattice aligned with the region's own
// axes. With adaptive set, both counts double until two successive averages
// agree to rel_tol.
double average_over_region(const TensorFunction& F, const Region& region,
                           const QuadratureSpec& quad = {});

nlohmann::json region_to_json(const Region& region);

}  // namespace bilmax
