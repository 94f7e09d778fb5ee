#include "bilmax/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "bilmax/numeric.hpp"

namespace bilmax {

DirectionSet DirectionSet::separated(double delta, double theta_max) {
  if (!(delta > 0.0)) throw std::invalid_argument("direction set: delta must be > 0");
  if (!(theta_max >= delta) || theta_max > std::numbers::pi / 2) {
    throw std::invalid_argument("direction set: need delta <= theta_max <= pi/2");
  }
  const auto count = static_cast<std::size_t>(std::floor(theta_max / delta)) + 1;
  std::vector<double> angles(count);
  for (std::size_t k = 0; k < count; ++k) angles[k] = static_cast<double>(k) * delta;
  return {Mode::separated, std::move(angles), delta, -1, theta_max};
}

DirectionSet DirectionSet::lacunary(int j_max) {
  if (j_max < 0) throw std::invalid_argument("direction set: j_max must be >= 0");
  std::vector<double> angles;
  for (int j = j_max; j >= 0; --j) angles.push_back(std::ldexp(1.0, -j));
  return {Mode::lacunary, std::move(angles), std::ldexp(1.0, -j_max), j_max, 1.0};
}

DirectionSet DirectionSet::symmetrized() const {
  std::vector<double> out = angles_;
  for (double a : angles_) {
    if (a != 0.0) out.push_back(-a);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return {mode_, std::move(out), delta_, j_max_, theta_max_};
}

DirectionSet build_direction_set(DirectionSet::Mode mode, double delta_or_jmax, double theta_max) {
  if (mode == DirectionSet::Mode::separated) return DirectionSet::separated(delta_or_jmax, theta_max);
  if (delta_or_jmax != std::floor(delta_or_jmax)) {
    throw std::invalid_argument("direction set: j_max must be an integer");
  }
  return DirectionSet::lacunary(static_cast<int>(delta_or_jmax));
}

Axes axes_for_angle(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double k = std::numbers::sqrt2 / 2;
  const Point u{(c - s) * k, (c + s) * k};
  const Point v{-((c + s) * k), (c - s) * k};
  return {u, v};
}

Rectangle::Rectangle(double center, double angle, double length, double width)
    : center_(center), angle_(angle), length_(length), width_(width), axes_(axes_for_angle(angle)) {
  if (!(width > 0.0) || !(length >= width) || !std::isfinite(length)) {
    throw std::invalid_argument("rectangle: need length >= width > 0");
  }
  if (!std::isfinite(center) || !std::isfinite(angle)) {
    throw std::invalid_argument("rectangle: non-finite center or angle");
  }
}

Point Rectangle::at(double s, double t) const {
  return {center_ + s * axes_.u.y + t * axes_.v.y, center_ + s * axes_.u.z + t * axes_.v.z};
}

std::array<Point, 4> Rectangle::corners() const {
  const double a = length_ / 2, b = width_ / 2;
  return {at(a, b), at(-a, b), at(-a, -b), at(a, -b)};
}

bool Rectangle::contains(Point p) const {
  const double dy = p.y - center_, dz = p.z - center_;
  const double s = dy * axes_.u.y + dz * axes_.u.z;
  const double t = dy * axes_.v.y + dz * axes_.v.z;
  return std::abs(s) <= length_ / 2 && std::abs(t) <= width_ / 2;
}

Rectangle rectangle_at(double x, double theta, double length, double width) {
  return Rectangle(x, theta, length, width);
}

Parallelogram::Parallelogram(double center, double half_length, double half_height)
    : center_(center), half_length_(half_length), half_height_(half_height) {
  if (!(half_length > 0.0) || !(half_height > 0.0)) {
    throw std::invalid_argument("parallelogram: l and w must be > 0");
  }
}

std::array<Point, 4> Parallelogram::vertices() const {
  const double x = center_, l = half_length_, w = half_height_;
  return {Point{x + l, x + l - w}, Point{x + l, x + l + w}, Point{x - l, x - l + w},
          Point{x - l, x - l - w}};
}

bool Parallelogram::contains(Point p) const {
  return std::abs(p.y - center_) <= half_length_ && std::abs(p.z - p.y) <= half_height_;
}

Parallelogram parallelogram_at(double x, double l, double w) { return Parallelogram(x, l, w); }

Parallelogram enclosing_parallelogram(const Rectangle& r) {
  // y - x = s u_y + t v_y and z - y = s (u_z - u_y) + t (v_z - v_y).
  const auto& [u, v] = r.axes();
  const double a = r.length() / 2, b = r.width() / 2;
  const double l = a * std::abs(u.y) + b * std::abs(v.y);
  const double w = a * std::abs(u.z - u.y) + b * std::abs(v.z - v.y);
  constexpr double inflate = 1.0 + 1e-12;
  const double floor_abs = 1e-15 * (r.length() + r.width());
  return {r.center(), std::max(l * inflate, floor_abs), std::max(w * inflate, floor_abs)};
}

Interval diagonal_chord(const Rectangle& r) {
  const double c = std::abs(std::cos(r.angle()));
  const double s = std::abs(std::sin(r.angle()));
  double chord = r.length();
  if (s > 0.0) chord = std::min(c > 0.0 ? r.length() / c : chord, r.width() / s);
  const double half = chord / (2.0 * std::numbers::sqrt2);
  return {r.center() - half, r.center() + half};
}

int dyadic_index(const Rectangle& r) {
  return static_cast<int>(std::ceil(std::log2(diagonal_chord(r).euclidean_length() / r.width())));
}

double region_area(const Region& region) {
  return std::visit([](const auto& r) { return r.area(); }, region);
}

namespace {

double lattice_average(const TensorFunction& F, const Rectangle& r, std::size_t nl, std::size_t ns) {
  CompensatedSum total;
  const double dl = r.length() / (2.0 * static_cast<double>(nl));
  const double dw = r.width() / (2.0 * static_cast<double>(ns));
  for (std::size_t i = 0; i < nl; ++i) {
    const double s = static_cast<double>(2 * static_cast<long>(i) + 1 - static_cast<long>(nl)) * dl;
    CompensatedSum row;
    for (std::size_t k = 0; k < ns; ++k) {
      const double t = static_cast<double>(2 * static_cast<long>(k) + 1 - static_cast<long>(ns)) * dw;
      const Point p = r.at(s, t);
      row.add(F(p.y, p.z));
    }
    total.add(row.value());
  }
  return total.value() / static_cast<double>(nl * ns);
}

double lattice_average(const TensorFunction& F, const Parallelogram& p, std::size_t nl, std::size_t ns) {
  CompensatedSum total;
  const double dl = p.half_length() / static_cast<double>(nl);
  const double dw = p.half_height() / static_cast<double>(ns);
  const double x = p.center();
  for (std::size_t i = 0; i < nl; ++i) {
    const double a = static_cast<double>(2 * static_cast<long>(i) + 1 - static_cast<long>(nl)) * dl;
    const double fy = F.f().at(x + a);
    if (fy == 0.0) continue;
    CompensatedSum row;
    for (std::size_t k = 0; k < ns; ++k) {
      const double b = static_cast<double>(2 * static_cast<long>(k) + 1 - static_cast<long>(ns)) * dw;
      row.add(fy * F.g().at(x + a + b));
    }
    total.add(row.value());
  }
  return total.value() / static_cast<double>(nl * ns);
}

}  // namespace

double average_over_region(const TensorFunction& F, const Region& region, const QuadratureSpec& quad) {
  if (quad.n_short < 4 || quad.n_long < 1) {
    throw std::invalid_argument("quadrature: need n_short >= 4 and n_long >= 1");
  }
  if (!(region_area(region) > 0.0)) throw std::invalid_argument("quadrature: degenerate region");

  auto once = [&](std::size_t nl, std::size_t ns) {
    return std::visit([&](const auto& r) { return lattice_average(F, r, nl, ns); }, region);
  };
  std::size_t nl = quad.n_long, ns = quad.n_short;
  double prev = once(nl, ns);
  if (!quad.adaptive) return prev;
  for (int k = 0; k < quad.max_refinements; ++k) {
    nl *= 2;
    ns *= 2;
    const double cur = once(nl, ns);
    if (std::abs(cur - prev) <= quad.rel_tol * std::abs(cur)) return cur;
    prev = cur;
  }
  return prev;
}

nlohmann::json region_to_json(const Region& region) {
  nlohmann::json j;
  auto points = [](const auto& pts) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& p : pts) a.push_back({p.y, p.z});
    return a;
  };
  if (const auto* r = std::get_if<Rectangle>(&region)) {
    j["kind"] = "rectangle";
    j["center"] = r->center();
    j["angle"] = r->angle();
    j["length"] = r->length();
    j["width"] = r->width();
    j["corners"] = points(r->corners());
    j["area"] = r->area();
  } else {
    const auto& p = std::get<Parallelogram>(region);
    j["kind"] = "parallelogram";
    j["center"] = p.center();
    j["angle"] = 0.0;
    j["half_length"] = p.half_length();
    j["half_height"] = p.half_height();
    j["corners"] = points(p.vertices());
    j["area"] = p.area();
  }
  return j;
}

}  // namespace bilmax
