#include "bilmax/tensor_integrator.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bilmax {

CumulativeIntegrals::CumulativeIntegrals(const SampledFunction& g)
    : grid_(g.grid()),
      n_(static_cast<std::ptrdiff_t>(g.grid().size())),
      inv_h_(1.0 / g.grid().h()),
      g_(g.values().begin(), g.values().end()),
      boundaries_(g.grid().size() + 1),
      G_(g.grid().size() + 1),
      GG_(g.grid().size() + 1) {
  const double h = grid_.h();
  for (std::size_t k = 0; k < boundaries_.size(); ++k) {
    boundaries_[k] = grid_.cell_left(static_cast<std::ptrdiff_t>(k));
  }
  G_[0] = 0.0;
  GG_[0] = 0.0;
  for (std::size_t k = 0; k < g_.size(); ++k) {
    G_[k + 1] = G_[k] + g_[k] * h;
    GG_[k + 1] = GG_[k] + G_[k] * h + 0.5 * g_[k] * h * h;
  }
}

std::ptrdiff_t CumulativeIntegrals::cell_of(double z) const {
  const double t = std::floor((z - grid_.x_min()) * inv_h_);
  if (t < 0.0) return -1;
  if (t >= static_cast<double>(n_)) return n_;
  return static_cast<std::ptrdiff_t>(t);
}

double CumulativeIntegrals::G_in(std::ptrdiff_t k, double z) const {
  if (k < 0) return 0.0;
  if (k >= n_) return G_[static_cast<std::size_t>(n_)];
  const auto i = static_cast<std::size_t>(k);
  return G_[i] + g_[i] * (z - boundaries_[i]);
}

CumulativeIntegrals::Node CumulativeIntegrals::node(double z) const {
  const auto k = cell_of(z);
  if (k < 0) return {z, 0.0, k};
  if (k >= n_) {
    const auto last = static_cast<std::size_t>(n_);
    return {z, GG_[last] + G_[last] * (z - boundaries_[last]), k};
  }
  const auto i = static_cast<std::size_t>(k);
  const double t = z - boundaries_[i];
  return {z, GG_[i] + t * (G_[i] + 0.5 * g_[i] * t), k};
}

double CumulativeIntegrals::mean_G(const Node& a, const Node& b) const {
  if (a.cell == b.cell) return G_in(a.cell, 0.5 * (a.z + b.z));
  const Node& lo = a.cell < b.cell ? a : b;
  const Node& hi = a.cell < b.cell ? b : a;
  if (hi.cell - lo.cell == 1) {
    // Straddles one edge; G is linear on each side.
    const double edge = boundary(hi.cell);
    const double w1 = std::max(0.0, edge - lo.z);
    const double w2 = std::max(0.0, hi.z - edge);
    if (w1 + w2 == 0.0) return G_in(lo.cell, lo.z);
    return (w1 * G_in(lo.cell, 0.5 * (lo.z + edge)) + w2 * G_in(hi.cell, 0.5 * (edge + hi.z))) /
           (w1 + w2);
  }
  return (hi.gg - lo.gg) / (hi.z - lo.z);
}

RectangleStencil::RectangleStencil(const RectangleShape& shape, double h, double phase)
    : shape_(shape) {
  const auto [u, v] = axes_for_angle(shape.angle);
  const double a = shape.length / 2, b = shape.width / 2;
  auto corner = [&](double s, double t) { return Point{s * u.y + t * v.y, s * u.z + t * v.z}; };
  const std::array<Point, 4> V{corner(a, b), corner(-a, b), corner(-a, -b), corner(a, -b)};

  double ymin = V[0].y, ymax = V[0].y;
  for (const auto& p : V) {
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }

  std::vector<double> ys{ymin, ymax};
  for (const auto& p : V) {
    if (p.y > ymin && p.y < ymax) ys.push_back(p.y);
  }
  const auto k0 = static_cast<long>(std::ceil((ymin + phase) / h));
  const auto k1 = static_cast<long>(std::floor((ymax + phase) / h));
  for (long k = k0; k <= k1; ++k) {
    const double y = static_cast<double>(k) * h - phase;
    if (y > ymin && y < ymax) ys.push_back(y);
  }
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

  const double eps = 1e-12 * (shape.length + shape.width);
  top_.reserve(ys.size());
  bottom_.reserve(ys.size());
  for (double y : ys) {
    double top = -std::numeric_limits<double>::infinity();
    double bottom = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < 4; ++e) {
      const Point& p = V[e];
      const Point& q = V[(e + 1) % 4];
      if (y < std::min(p.y, q.y) - eps || y > std::max(p.y, q.y) + eps) continue;
      if (p.y == q.y) {
        top = std::max({top, p.z, q.z});
        bottom = std::min({bottom, p.z, q.z});
        continue;
      }
      const double t = std::clamp((y - p.y) / (q.y - p.y), 0.0, 1.0);
      const double z = p.z + t * (q.z - p.z);
      top = std::max(top, z);
      bottom = std::min(bottom, z);
    }
    top_.push_back(top);
    bottom_.push_back(bottom);
  }

  for (std::size_t j = 0; j + 1 < ys.size(); ++j) {
    dy_.push_back(ys[j + 1] - ys[j]);
    const double mid = 0.5 * (ys[j] + ys[j + 1]);
    offset_.push_back(static_cast<std::ptrdiff_t>(std::floor((mid + phase) / h)));
  }
}

double RectangleStencil::integral(const SampledFunction& f, const CumulativeIntegrals& g, double x,
                                  std::ptrdiff_t cell) const {
  if (dy_.empty() || f.is_zero()) return 0.0;
  const auto [lo, hi] = f.nonzero_range();
  const auto rel_lo = static_cast<std::ptrdiff_t>(lo) - cell;
  const auto rel_hi = static_cast<std::ptrdiff_t>(hi) - 1 - cell;
  const auto j0 = static_cast<std::size_t>(std::lower_bound(offset_.begin(), offset_.end(), rel_lo) -
                                           offset_.begin());
  const auto j1 = static_cast<std::size_t>(std::upper_bound(offset_.begin(), offset_.end(), rel_hi) -
                                           offset_.begin());
  if (j0 >= j1) return 0.0;

  const auto values = f.values();
  auto top_a = g.node(x + top_[j0]);
  auto bot_a = g.node(x + bottom_[j0]);
  double sum = 0.0;
  for (std::size_t j = j0; j < j1; ++j) {
    const auto top_b = g.node(x + top_[j + 1]);
    const auto bot_b = g.node(x + bottom_[j + 1]);
    const double fv = values[static_cast<std::size_t>(cell + offset_[j])];
    if (fv != 0.0) sum += fv * dy_[j] * (g.mean_G(top_a, top_b) - g.mean_G(bot_a, bot_b));
    top_a = top_b;
    bot_a = bot_b;
  }
  return std::max(0.0, sum);
}

ParallelogramTable::ParallelogramTable(const SampledFunction& f, const CumulativeIntegrals& g, double w)
    : f_(&f), g_(&g), w_(w), Q_(f.grid().size() + 1, 0.0) {
  if (!(w > 0.0)) throw std::invalid_argument("parallelogram table: w must be > 0");
  if (!(f.grid() == g.grid())) throw std::invalid_argument("parallelogram table: grids differ");
  const auto& grid = f.grid();
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const double fv = f[c];
    const auto k = static_cast<std::ptrdiff_t>(c);
    Q_[c + 1] = Q_[c] + (fv != 0.0 ? fv * window_integral(grid.cell_left(k), grid.cell_left(k + 1)) : 0.0);
  }
}

double ParallelogramTable::window_integral(double a, double b) const {
  if (!(b > a)) return 0.0;
  const auto& grid = f_->grid();
  std::array<double, 10> pts{};
  std::size_t m = 0;
  pts[m++] = a;
  for (double shift : {w_, -w_}) {
    // Interior points where t + shift crosses a cell edge.
    const auto k0 = grid.cell_of(a + shift) + 1;
    const auto k1 = grid.cell_of(b + shift);
    for (auto k = k0; k <= k1 && m + 1 < pts.size(); ++k) {
      const double y = grid.cell_left(k) - shift;
      if (y > a && y < b) pts[m++] = y;
    }
  }
  pts[m++] = b;
  std::sort(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(m));
  auto window = [&](double t) { return g_->G(t + w_) - g_->G(t - w_); };
  double sum = 0.0;
  double prev_t = pts[0], prev_w = window(pts[0]);
  for (std::size_t i = 1; i < m; ++i) {
    const double wi = window(pts[i]);
    sum += 0.5 * (prev_w + wi) * (pts[i] - prev_t);
    prev_t = pts[i];
    prev_w = wi;
  }
  return sum;
}

double ParallelogramTable::Q(double y) const {
  const auto& grid = f_->grid();
  const auto c = grid.cell_of(y);
  if (c < 0) return 0.0;
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  if (c >= n) return Q_.back();
  const auto i = static_cast<std::size_t>(c);
  const double fv = (*f_)[i];
  return Q_[i] + (fv != 0.0 ? fv * window_integral(grid.cell_left(c), y) : 0.0);
}

TensorIntegrator::TensorIntegrator(const SampledFunction& f, const SampledFunction& g)
    : f_(f), G_(g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("TensorIntegrator: grids differ");
}

double TensorIntegrator::rectangle_integral(const Rectangle& r) const {
  const auto& grid = f_.grid();
  const auto cell = grid.cell_of(r.center());
  const double phase = r.center() - grid.cell_left(cell);
  const RectangleStencil stencil({r.angle(), r.length(), r.width()}, grid.h(), phase);
  return stencil.integral(f_, G_, r.center(), cell);
}

double TensorIntegrator::rectangle_average_at(const RectangleShape& shape, std::size_t i) const {
  const auto& grid = f_.grid();
  const RectangleStencil stencil(shape, grid.h(), 0.5 * grid.h());
  return stencil.integral(f_, G_, grid.point(i), static_cast<std::ptrdiff_t>(i)) /
         (shape.length * shape.width);
}

double TensorIntegrator::parallelogram_integral(const Parallelogram& p) const {
  const ParallelogramTable table(f_, G_, p.half_height());
  return table.integral(p.center(), p.half_length());
}

double TensorIntegrator::average(const Region& region) const {
  if (const auto* r = std::get_if<Rectangle>(&region)) return rectangle_average(*r);
  return parallelogram_average(std::get<Parallelogram>(region));
}

}  // namespace bilmax
