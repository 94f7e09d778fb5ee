#include "bilmax/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "bilmax/numeric.hpp"

namespace bilmax {

namespace {

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_real(std::string_view s) {
  double v = 0.0;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw std::invalid_argument("bad number in function spec: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(parse_real(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double bump_profile(double x, double c, double w) {
  const double r = (x - c) / w;
  if (std::abs(r) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - r * r));
}

std::vector<double> random_pieces(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> v(kRandomPieces);
  for (auto& x : v) x = uniform01(rng);
  return v;
}

}  // namespace

Grid1D::Grid1D(double x_min, double x_max, std::size_t n)
    : x_min_(x_min), x_max_(x_max), n_(n), h_((x_max - x_min) / static_cast<double>(n)) {
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw std::invalid_argument("Grid1D: need x_max > x_min");
  }
  if (n < 2) throw std::invalid_argument("Grid1D: need at least 2 cells");
}

Grid1D Grid1D::standard(std::size_t n) { return Grid1D(kDomainMin, kDomainMax, n); }

std::ptrdiff_t Grid1D::cell_of(double x) const {
  return static_cast<std::ptrdiff_t>(std::floor((x - x_min_) / h_));
}

FunctionSpec::FunctionSpec(Kind kind, std::vector<double> params, std::uint64_t seed)
    : kind_(kind), params_(std::move(params)), seed_(seed) {
  validate();
}

FunctionSpec FunctionSpec::indicator(double a, double b) { return {Kind::indicator, {a, b}}; }

FunctionSpec FunctionSpec::interval_union(std::vector<std::pair<double, double>> intervals) {
  std::vector<double> p;
  for (auto [a, b] : intervals) {
    p.push_back(a);
    p.push_back(b);
  }
  return {Kind::interval_union, std::move(p)};
}

FunctionSpec FunctionSpec::bump(double center, double width) {
  return {Kind::bump, {center, width}};
}

FunctionSpec FunctionSpec::ramp() { return {Kind::ramp, {}}; }

FunctionSpec FunctionSpec::random(std::uint64_t seed) { return {Kind::random, {}, seed}; }

FunctionSpec FunctionSpec::constant(double c) { return {Kind::constant, {c}}; }

void FunctionSpec::validate() const {
  auto need = [&](std::size_t k) {
    if (params_.size() != k) throw std::invalid_argument("function spec: wrong parameter count");
  };
  auto inside = [](double a, double b) {
    if (!(a < b)) throw std::invalid_argument("function spec: empty interval");
    if (a < -kSupportRadius || b > kSupportRadius) {
      throw std::invalid_argument("function spec: support must lie in [-3, 3]");
    }
  };
  switch (kind_) {
    case Kind::indicator:
      need(2);
      inside(params_[0], params_[1]);
      break;
    case Kind::interval_union:
      if (params_.empty() || params_.size() % 2 != 0) {
        throw std::invalid_argument("function spec: union needs pairs of endpoints");
      }
      for (std::size_t i = 0; i < params_.size(); i += 2) inside(params_[i], params_[i + 1]);
      break;
    case Kind::bump:
      need(2);
      if (!(params_[1] > 0)) throw std::invalid_argument("function spec: bump width must be > 0");
      inside(params_[0] - params_[1], params_[0] + params_[1]);
      break;
    case Kind::ramp:
    case Kind::random:
      need(0);
      break;
    case Kind::constant:
      need(1);
      if (params_[0] < 0) throw std::invalid_argument("function spec: constant must be >= 0");
      break;
  }
}

FunctionSpec FunctionSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const auto head = text.substr(0, colon);
  const auto tail = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (head == "ramp" && colon == std::string_view::npos) return ramp();
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("function spec: expected 'kind:params', got '" + std::string(text) + "'");
  }
  if (head == "random") {
    std::uint64_t seed = 0;
    auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), seed);
    if (ec != std::errc{} || ptr != tail.data() + tail.size()) {
      throw std::invalid_argument("function spec: bad seed '" + std::string(tail) + "'");
    }
    return random(seed);
  }
  const auto p = parse_list(tail);
  if (head == "indicator") return FunctionSpec(Kind::indicator, p);
  if (head == "union") return FunctionSpec(Kind::interval_union, p);
  if (head == "bump") return FunctionSpec(Kind::bump, p);
  if (head == "const") return FunctionSpec(Kind::constant, p);
  throw std::invalid_argument("function spec: unknown kind '" + std::string(head) + "'");
}

std::string FunctionSpec::to_string() const {
  auto join = [this](std::string out) {
    for (std::size_t i = 0; i < params_.size(); ++i) {
      if (i) out += ',';
      out += format_real(params_[i]);
    }
    return out;
  };
  switch (kind_) {
    case Kind::indicator: return join("indicator:");
    case Kind::interval_union: return join("union:");
    case Kind::bump: return join("bump:");
    case Kind::ramp: return "ramp";
    case Kind::random: return "random:" + std::to_string(seed_);
    case Kind::constant: return join("const:");
  }
  return {};
}

std::pair<double, double> FunctionSpec::support() const {
  switch (kind_) {
    case Kind::indicator: return {params_[0], params_[1]};
    case Kind::interval_union: {
      double lo = params_[0], hi = params_[1];
      for (std::size_t i = 0; i < params_.size(); i += 2) {
        lo = std::min(lo, params_[i]);
        hi = std::max(hi, params_[i + 1]);
      }
      return {lo, hi};
    }
    case Kind::bump: return {params_[0] - params_[1], params_[0] + params_[1]};
    case Kind::ramp: return {0.0, 1.0};
    case Kind::random:
    case Kind::constant: return {-kSupportRadius, kSupportRadius};
  }
  return {0.0, 0.0};
}

SampledFunction::SampledFunction(Grid1D grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("SampledFunction: value count does not match grid");
  }
  std::size_t lo = values_.size(), hi = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0) || !std::isfinite(values_[i])) {
      throw std::invalid_argument("SampledFunction: values must be finite and >= 0");
    }
    if (values_[i] > 0.0) {
      lo = std::min(lo, i);
      hi = i + 1;
    }
  }
  nonzero_ = lo < hi ? std::pair{lo, hi} : std::pair<std::size_t, std::size_t>{0, 0};
}

double SampledFunction::at(double x) const {
  const auto k = grid_.cell_of(x);
  if (k < 0 || k >= static_cast<std::ptrdiff_t>(values_.size())) return 0.0;
  return values_[static_cast<std::size_t>(k)];
}

SampledFunction SampledFunction::scaled(double c) const {
  if (!(c >= 0.0)) throw std::invalid_argument("SampledFunction::scaled: factor must be >= 0");
  auto v = values_;
  for (auto& x : v) x *= c;
  return {grid_, std::move(v)};
}

SampledFunction sample_function(const FunctionSpec& spec, const Grid1D& grid) {
  const auto& p = spec.params();
  std::vector<double> pieces;
  if (spec.kind() == FunctionSpec::Kind::random) pieces = random_pieces(spec.seed());

  auto eval = [&](double x) -> double {
    switch (spec.kind()) {
      case FunctionSpec::Kind::indicator:
        return (x >= p[0] && x < p[1]) ? 1.0 : 0.0;
      case FunctionSpec::Kind::interval_union:
        for (std::size_t i = 0; i < p.size(); i += 2) {
          if (x >= p[i] && x < p[i + 1]) return 1.0;
        }
        return 0.0;
      case FunctionSpec::Kind::bump:
        return bump_profile(x, p[0], p[1]);
      case FunctionSpec::Kind::ramp:
        return (x >= 0.0 && x < 1.0) ? x : 0.0;
      case FunctionSpec::Kind::random: {
        if (x < -kSupportRadius || x >= kSupportRadius) return 0.0;
        const auto k = static_cast<int>((x + kSupportRadius) / (2.0 * kSupportRadius) * kRandomPieces);
        return pieces[static_cast<std::size_t>(std::clamp(k, 0, kRandomPieces - 1))];
      }
      case FunctionSpec::Kind::constant:
        return (x >= -kSupportRadius && x < kSupportRadius) ? p[0] : 0.0;
    }
    return 0.0;
  };

  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::max(0.0, eval(grid.point(i)));
  return {grid, std::move(v)};
}

SampledFunction multiply(const SampledFunction& a, const SampledFunction& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("multiply: grids differ");
  std::vector<double> v(a.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * b[i];
  return {a.grid(), std::move(v)};
}

SampledFunction add(const SampledFunction& a, const SampledFunction& b) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("add: grids differ");
  std::vector<double> v(a.values().size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
  return {a.grid(), std::move(v)};
}

double lp_norm(const SampledFunction& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  CompensatedSum s;
  for (double v : f.values()) s.add(power(v, p));
  return std::pow(s.value() * f.grid().h(), 1.0 / p);
}

TensorFunction::TensorFunction(SampledFunction f, SampledFunction g)
    : f_(std::move(f)), g_(std::move(g)) {
  if (!(f_.grid() == g_.grid())) throw std::invalid_argument("TensorFunction: grids differ");
}

double tensor_lp_norm(const TensorFunction& F, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("tensor_lp_norm: p must be >= 1");
  const auto f = F.f().values();
  const auto g = F.g().values();
  const double h = F.grid().h();
  CompensatedSum total;
  for (double fy : f) {
    if (fy == 0.0) continue;
    CompensatedSum row;
    for (double gz : g) row.add(power(fy * gz, p));
    total.add(row.value());
  }
  return std::pow(total.value() * h * h, 1.0 / p);
}

}  // namespace bilmax
