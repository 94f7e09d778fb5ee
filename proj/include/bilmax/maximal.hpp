#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "bilmax/geometry.hpp"
#include "bilmax/sampling.hpp"
#include "bilmax/tensor_integrator.hpp"

namespace bilmax {

enum class OperatorKind { m1, m_delta, m_lac, m_diag };

struct OperatorTag {
  OperatorKind kind = OperatorKind::m1;
  double parameter = 0.0;  // delta for m_delta, J_max for m_lac

  // "m1", "mdelta", "mlac" or "mdiag".
  std::string name() const;
  static OperatorKind parse_kind(const std::string& name);
  bool operator==(const OperatorTag&) const = default;
};

// The region that attained the maximum at a grid point, all centered at (x, x):
//   m1     : window [x - r, x + r], length = 2r
//   m_diag : P_{x,l,w}, length = 2l, width = 2w
//   m_delta, m_lac : rectangle with the given angle, length and width
struct Witness {
  double angle = 0.0;
  double length = 0.0;
  double width = 0.0;
  bool operator==(const Witness&) const = default;
};

struct MaximalField {
  Grid1D grid;
  std::vector<double> values;
  OperatorTag tag;
  std::vector<Witness> witness;

  double max() const;
};

inline const double kDefaultRadiusRatio = std::exp2(1.0 / 64.0);

// Geometric radii r_k = r_0 rho^k, from r_0 up to the first radius >= r_max.
class RadiusSchedule {
 public:
  static RadiusSchedule geometric(double r0, double ratio, double r_max);
  // r_0 = h / 2 (a single cell), rho = 2^(1/64), up to 10.
  static RadiusSchedule for_grid(const Grid1D& grid, double ratio = kDefaultRadiusRatio, double r_max = 10.0);

  const std::vector<double>& radii() const { return radii_; }
  double ratio() const { return ratio_; }

 private:
  std::vector<double> radii_;
  double ratio_ = 1.0;
};

// Dyadic half-lengths l and half-heights w; m_diag visits every pair w <= l.
struct ParallelogramSchedule {
  std::vector<double> half_lengths;
  std::vector<double> half_heights;

  // h/2 * 2^k up to l_max.
  static ParallelogramSchedule dyadic(const Grid1D& grid, double l_max = 5.0);
};

struct ShapeSchedule {
  struct Shape {
    double length;
    double width;
  };
  std::vector<Shape> shapes;

  // L = 2^-k in [h, max_length], W = L 2^-m in [h, L].
  static ShapeSchedule dyadic(const Grid1D& grid, double max_length = 1.0);
  static ShapeSchedule single(double length, double width);
};

// Centered Hardy-Littlewood maximal function.
MaximalField m1_maximal(const SampledFunction& f, const RadiusSchedule& radii);
double m1_at(const CumulativeIntegrals& f, double x, const RadiusSchedule& radii);

// sup_w (1/2w) int_{-w}^{w} F(y, z + s) ds, which factors as f(y) (M_1 g)(z).
double m_vertical(const TensorFunction& F, double y, double z, const RadiusSchedule& widths);

MaximalField m_diag(const SampledFunction& f, const SampledFunction& g,
                    const ParallelogramSchedule& schedule);

// Sup over 1 x delta rectangles centered at (x, x), one per direction of omega.
MaximalField m_delta(const SampledFunction& f, const SampledFunction& g, double delta,
                     const DirectionSet& omega);

// Sup over rectangles at angles 2^-j (0 <= j <= j_max) with every scheduled shape.
MaximalField m_lac(const SampledFunction& f, const SampledFunction& g, int j_max,
                   const ShapeSchedule& shapes);

// One field per lacunary angle 2^-j, j = 0..j_max; their running pointwise
// max over j = 0..J equals m_lac at J_max = J.
std::vector<MaximalField> m_lac_by_direction(const SampledFunction& f, const SampledFunction& g,
                                             int j_max, const ShapeSchedule& shapes);

// Pointwise max; witnesses come from whichever field is strictly larger (ties keep a).
MaximalField pointwise_max(const MaximalField& a, const MaximalField& b);

// M_1(f M_1 g), the right-hand side of the M_D domination.
MaximalField nested_m1(const SampledFunction& f, const SampledFunction& g, const RadiusSchedule& radii);

// Recomputes the average over the stored witness region at grid point i.
double evaluate_witness(const MaximalField& field, std::size_t i, const SampledFunction& f,
                        const SampledFunction& g);

struct DominationReport {
  double max_ratio = 0.0;  // max of A/B where B > 0
  double threshold = 0.0;
  bool pass = true;
  std::size_t argmax = 0;
  double argmax_x = 0.0;
  std::size_t compared = 0;
  // Points where A > 0 but B == 0; these fail any finite constant.
  std::size_t unbounded = 0;
};

DominationReport domination_report(const MaximalField& a, const MaximalField& b, double c);

}  // namespace bilmax
