#include "bilmax/maximal.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

#include "bilmax/parallel.hpp"

namespace bilmax {

namespace {

constexpr std::size_t kCenterGrain = 64;

double window_average(const CumulativeIntegrals& F, double x, double r) {
  return (F.G(x + r) - F.G(x - r)) / (2.0 * r);
}

double parallelogram_average(const ParallelogramTable& table, double x, double l, double w) {
  return table.integral(x, l) / (4.0 * l * w);
}

void check_same_grid(const SampledFunction& f, const SampledFunction& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("maximal operator: f and g grids differ");
}

MaximalField rectangle_family_field(const SampledFunction& f, const SampledFunction& g,
                                    const std::vector<RectangleShape>& shapes, OperatorTag tag) {
  check_same_grid(f, g);
  const auto& grid = f.grid();
  const std::size_t n = grid.size();
  const CumulativeIntegrals G(g);

  std::vector<RectangleStencil> stencils;
  stencils.reserve(shapes.size());
  for (const auto& s : shapes) stencils.emplace_back(s, grid.h(), 0.5 * grid.h());

  std::vector<double> best(n, -1.0);
  std::vector<Witness> witness(n);
  parallel_for(n, kCenterGrain, [&](std::size_t begin, std::size_t end) {
    for (const auto& st : stencils) {
      const auto& sh = st.shape();
      const double area = sh.length * sh.width;
      for (std::size_t i = begin; i < end; ++i) {
        const double v = st.integral(f, G, grid.point(i), static_cast<std::ptrdiff_t>(i)) / area;
        if (v > best[i]) {
          best[i] = v;
          witness[i] = {sh.angle, sh.length, sh.width};
        }
      }
    }
  });
  return {grid, std::move(best), tag, std::move(witness)};
}

std::vector<RectangleShape> lacunary_shapes(int j, const ShapeSchedule& schedule) {
  std::vector<RectangleShape> out;
  const double angle = std::ldexp(1.0, -j);
  for (const auto& s : schedule.shapes) out.push_back({angle, s.length, s.width});
  return out;
}

}  // namespace

std::string OperatorTag::name() const {
  switch (kind) {
    case OperatorKind::m1: return "m1";
    case OperatorKind::m_delta: return "mdelta";
    case OperatorKind::m_lac: return "mlac";
    case OperatorKind::m_diag: return "mdiag";
  }
  return {};
}

OperatorKind OperatorTag::parse_kind(const std::string& name) {
  if (name == "m1") return OperatorKind::m1;
  if (name == "mdelta") return OperatorKind::m_delta;
  if (name == "mlac") return OperatorKind::m_lac;
  if (name == "mdiag") return OperatorKind::m_diag;
  throw std::invalid_argument("unknown operator '" + name + "'");
}

double MaximalField::max() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

RadiusSchedule RadiusSchedule::geometric(double r0, double ratio, double r_max) {
  if (!(r0 > 0.0) || !(ratio > 1.0) || !(r_max >= r0)) {
    throw std::invalid_argument("radius schedule: need r0 > 0, ratio > 1, r_max >= r0");
  }
  RadiusSchedule s;
  s.ratio_ = ratio;
  for (int k = 0;; ++k) {
    const double r = r0 * std::pow(ratio, k);
    s.radii_.push_back(r);
    if (r >= r_max) break;
  }
  return s;
}

RadiusSchedule RadiusSchedule::for_grid(const Grid1D& grid, double ratio, double r_max) {
  return geometric(grid.h() / 2, ratio, r_max);
}

ParallelogramSchedule ParallelogramSchedule::dyadic(const Grid1D& grid, double l_max) {
  ParallelogramSchedule s;
  const double r0 = grid.h() / 2;
  if (!(l_max >= r0)) throw std::invalid_argument("parallelogram schedule: l_max below a cell");
  for (int k = 0;; ++k) {
    const double v = std::ldexp(r0, k);
    if (v > l_max * (1.0 + 1e-12)) break;
    s.half_lengths.push_back(v);
  }
  if (s.half_lengths.back() < l_max * (1.0 - 1e-12)) s.half_lengths.push_back(l_max);
  s.half_heights = s.half_lengths;
  return s;
}

ShapeSchedule ShapeSchedule::dyadic(const Grid1D& grid, double max_length) {
  ShapeSchedule s;
  for (double L = max_length; L >= grid.h(); L /= 2) {
    for (double W = L; W >= grid.h(); W /= 2) s.shapes.push_back({L, W});
  }
  if (s.shapes.empty()) throw std::invalid_argument("shape schedule: max_length below grid spacing");
  return s;
}

ShapeSchedule ShapeSchedule::single(double length, double width) {
  if (!(width > 0.0) || !(length >= width)) {
    throw std::invalid_argument("shape schedule: need length >= width > 0");
  }
  return {{{length, width}}};
}

MaximalField m1_maximal(const SampledFunction& f, const RadiusSchedule& radii) {
  const auto& r = radii.radii();
  if (r.empty()) throw std::invalid_argument("m1_maximal: empty radius schedule");
  if (radii.ratio() > std::numbers::sqrt2 * (1.0 + 1e-12)) {
    throw std::invalid_argument("m1_maximal: schedule ratio must be <= sqrt(2)");
  }
  const auto& grid = f.grid();
  const CumulativeIntegrals F(f);
  std::vector<double> best(grid.size(), -1.0);
  std::vector<Witness> witness(grid.size());
  parallel_for(grid.size(), kCenterGrain, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double x = grid.point(i);
      for (double radius : r) {
        const double v = window_average(F, x, radius);
        if (v > best[i]) {
          best[i] = v;
          witness[i] = {0.0, 2.0 * radius, 0.0};
        }
      }
    }
  });
  return {grid, std::move(best), {OperatorKind::m1, 0.0}, std::move(witness)};
}

double m1_at(const CumulativeIntegrals& f, double x, const RadiusSchedule& radii) {
  if (radii.radii().empty()) throw std::invalid_argument("m1_at: empty radius schedule");
  double best = 0.0;
  for (double r : radii.radii()) best = std::max(best, window_average(f, x, r));
  return best;
}

double m_vertical(const TensorFunction& F, double y, double z, const RadiusSchedule& widths) {
  const double fy = F.f().at(y);
  if (fy == 0.0) return 0.0;
  return fy * m1_at(CumulativeIntegrals(F.g()), z, widths);
}

MaximalField m_diag(const SampledFunction& f, const SampledFunction& g,
                    const ParallelogramSchedule& schedule) {
  check_same_grid(f, g);
  if (schedule.half_lengths.empty() || schedule.half_heights.empty()) {
    throw std::invalid_argument("m_diag: empty schedule");
  }
  const auto& grid = f.grid();
  const CumulativeIntegrals G(g);
  std::vector<double> best(grid.size(), -1.0);
  std::vector<Witness> witness(grid.size());
  for (double w : schedule.half_heights) {
    const ParallelogramTable table(f, G, w);
    parallel_for(grid.size(), kCenterGrain, [&](std::size_t begin, std::size_t end) {
      for (double l : schedule.half_lengths) {
        if (l < w) continue;
        for (std::size_t i = begin; i < end; ++i) {
          const double v = parallelogram_average(table, grid.point(i), l, w);
          if (v > best[i]) {
            best[i] = v;
            witness[i] = {0.0, 2.0 * l, 2.0 * w};
          }
        }
      }
    });
  }
  if (best.front() < 0.0) throw std::invalid_argument("m_diag: schedule has no pair with w <= l");
  return {grid, std::move(best), {OperatorKind::m_diag, 0.0}, std::move(witness)};
}

MaximalField m_delta(const SampledFunction& f, const SampledFunction& g, double delta,
                     const DirectionSet& omega) {
  if (omega.mode() != DirectionSet::Mode::separated) {
    throw std::invalid_argument("m_delta: direction set must be delta-separated");
  }
  if (!(delta > 0.0) || delta > 1.0 || std::abs(omega.delta() - delta) > 1e-12 * delta) {
    throw std::invalid_argument("m_delta: delta must be in (0, 1] and match the direction set");
  }
  std::vector<RectangleShape> shapes;
  for (double a : omega.angles()) shapes.push_back({a, 1.0, delta});
  return rectangle_family_field(f, g, shapes, {OperatorKind::m_delta, delta});
}

MaximalField m_lac(const SampledFunction& f, const SampledFunction& g, int j_max,
                   const ShapeSchedule& shapes) {
  if (j_max < 0) throw std::invalid_argument("m_lac: j_max must be >= 0");
  if (shapes.shapes.empty()) throw std::invalid_argument("m_lac: empty shape schedule");
  std::vector<RectangleShape> all;
  for (int j = 0; j <= j_max; ++j) {
    const auto s = lacunary_shapes(j, shapes);
    all.insert(all.end(), s.begin(), s.end());
  }
  return rectangle_family_field(f, g, all, {OperatorKind::m_lac, static_cast<double>(j_max)});
}

std::vector<MaximalField> m_lac_by_direction(const SampledFunction& f, const SampledFunction& g,
                                             int j_max, const ShapeSchedule& shapes) {
  if (j_max < 0) throw std::invalid_argument("m_lac: j_max must be >= 0");
  if (shapes.shapes.empty()) throw std::invalid_argument("m_lac: empty shape schedule");
  std::vector<MaximalField> out;
  for (int j = 0; j <= j_max; ++j) {
    out.push_back(rectangle_family_field(f, g, lacunary_shapes(j, shapes),
                                         {OperatorKind::m_lac, static_cast<double>(j)}));
  }
  return out;
}

MaximalField pointwise_max(const MaximalField& a, const MaximalField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("pointwise_max: grids differ");
  MaximalField out = a;
  out.tag.parameter = std::max(a.tag.parameter, b.tag.parameter);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (b.values[i] > out.values[i]) {
      out.values[i] = b.values[i];
      out.witness[i] = b.witness[i];
    }
  }
  return out;
}

MaximalField nested_m1(const SampledFunction& f, const SampledFunction& g, const RadiusSchedule& radii) {
  check_same_grid(f, g);
  const auto mg = m1_maximal(g, radii);
  return m1_maximal(multiply(f, SampledFunction(g.grid(), mg.values)), radii);
}

double evaluate_witness(const MaximalField& field, std::size_t i, const SampledFunction& f,
                        const SampledFunction& g) {
  if (i >= field.values.size() || field.witness.size() != field.values.size()) {
    throw std::out_of_range("evaluate_witness: no witness at this index");
  }
  const auto& w = field.witness[i];
  const double x = field.grid.point(i);
  switch (field.tag.kind) {
    case OperatorKind::m1:
      return window_average(CumulativeIntegrals(f), x, w.length / 2);
    case OperatorKind::m_diag: {
      const CumulativeIntegrals G(g);
      const ParallelogramTable table(f, G, w.width / 2);
      return parallelogram_average(table, x, w.length / 2, w.width / 2);
    }
    case OperatorKind::m_delta:
    case OperatorKind::m_lac:
      return TensorIntegrator(f, g).rectangle_average_at({w.angle, w.length, w.width}, i);
  }
  return 0.0;
}

DominationReport domination_report(const MaximalField& a, const MaximalField& b, double c) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("domination_report: grids differ");
  DominationReport r;
  r.threshold = c;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (b.values[i] > 0.0) {
      const double ratio = a.values[i] / b.values[i];
      if (r.compared == 0 || ratio > r.max_ratio) {
        r.max_ratio = ratio;
        r.argmax = i;
      }
      ++r.compared;
    } else if (a.values[i] > 0.0) {
      ++r.unbounded;
    }
  }
  r.argmax_x = a.grid.point(r.argmax);
  r.pass = r.unbounded == 0 && r.max_ratio <= c;
  return r;
}

}  // namespace bilmax
