#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bilmax {

inline constexpr double kDomainMin = -5.0;
inline constexpr double kDomainMax = 5.0;
inline constexpr double kSupportRadius = 3.0;
inline constexpr std::size_t kDefaultGridSize = std::size_t{1} << 13;

// Uniform partition of [x_min, x_max] into n cells. Samples live at cell
// midpoints, x_i = x_min + (i + 1/2) h.
class Grid1D {
 public:
  Grid1D(double x_min, double x_max, std::size_t n);

  // The default working domain [-5, 5].
  static Grid1D standard(std::size_t n = kDefaultGridSize);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double h() const { return h_; }
  std::size_t size() const { return n_; }

  double point(std::size_t i) const { return x_min_ + (static_cast<double>(i) + 0.5) * h_; }
  double cell_left(std::ptrdiff_t k) const { return x_min_ + static_cast<double>(k) * h_; }

  // floor((x - x_min) / h); may fall outside [0, n).
  std::ptrdiff_t cell_of(double x) const;

  bool operator==(const Grid1D&) const = default;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  double h_;
};

// Text-described input function. Grammar (reals comma separated):
//   indicator:a,b | union:a1,b1,a2,b2,... | bump:c,w | ramp | random:seed | const:c
class FunctionSpec {
 public:
  enum class Kind { indicator, interval_union, bump, ramp, random, constant };

  static FunctionSpec indicator(double a, double b);
  static FunctionSpec interval_union(std::vector<std::pair<double, double>> intervals);
  static FunctionSpec bump(double center, double width);
  static FunctionSpec ramp();
  static FunctionSpec random(std::uint64_t seed);
  static FunctionSpec constant(double c);

  static FunctionSpec parse(std::string_view text);

  // Round-trips exactly through parse().
  std::string to_string() const;

  Kind kind() const { return kind_; }
  const std::vector<double>& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }

  // Closed interval containing the support.
  std::pair<double, double> support() const;

  bool operator==(const FunctionSpec&) const = default;

 private:
  FunctionSpec(Kind kind, std::vector<double> params, std::uint64_t seed = 0);
  void validate() const;

  Kind kind_;
  std::vector<double> params_;
  std::uint64_t seed_;
};

// Number of equal pieces of [-3, 3] carrying independent uniform values in a
// random:seed function.
inline constexpr int kRandomPieces = 48;

// Non-negative samples on a grid, extended by zero outside [x_min, x_max] and
// piecewise constant on cells.
class SampledFunction {
 public:
  SampledFunction(Grid1D grid, std::vector<double> values);

  const Grid1D& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  // Value of the piecewise-constant interpolant at x.
  double at(double x) const;

  SampledFunction scaled(double c) const;

  // First and one-past-last nonzero cell; {0, 0} when identically zero.
  std::pair<std::size_t, std::size_t> nonzero_range() const { return nonzero_; }
  bool is_zero() const { return nonzero_.first == nonzero_.second; }

 private:
  Grid1D grid_;
  std::vector<double> values_;
  std::pair<std::size_t, std::size_t> nonzero_;
};

SampledFunction sample_function(const FunctionSpec& spec, const Grid1D& grid);

// Pointwise product on a shared grid.
SampledFunction multiply(const SampledFunction& a, const SampledFunction& b);
SampledFunction add(const SampledFunction& a, const SampledFunction& b);

double lp_norm(const SampledFunction& f, double p);

// F(y, z) = f(y) g(z), evaluated on demand.
class TensorFunction {
 public:
  TensorFunction(SampledFunction f, SampledFunction g);

  const SampledFunction& f() const { return f_; }
  const SampledFunction& g() const { return g_; }
  const Grid1D& grid() const { return f_.grid(); }

  double operator()(double y, double z) const { return f_.at(y) * g_.at(z); }

 private:
  SampledFunction f_;
  SampledFunction g_;
};

// Midpoint-rule p-norm of F over grid x grid, summed cell by cell in the plane.
double tensor_lp_norm(const TensorFunction& F, double p);

}  // namespace bilmax
