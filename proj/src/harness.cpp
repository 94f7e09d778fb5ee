#include "bilmax/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bilmax/geometry.hpp"
#include "bilmax/numeric.hpp"

namespace bilmax {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("expected a number, got '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("expected a number, got '" + s + "'");
  return v;
}

long long parse_integer(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("expected an integer, got '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("expected an integer, got '" + s + "'");
  return v;
}

std::uint64_t parse_unsigned(const std::string& s) {
  const long long v = parse_integer(s);
  if (v < 0) throw std::invalid_argument("expected a non-negative integer, got '" + s + "'");
  return static_cast<std::uint64_t>(v);
}

// "2^-k" -> exponent -k; false for any other token.
bool power_of_two_exponent(const std::string& tok, int& exponent) {
  if (tok.rfind("2^", 0) != 0) return false;
  exponent = static_cast<int>(parse_integer(tok.substr(2)));
  return true;
}

double parse_delta_token(const std::string& tok) {
  int e = 0;
  if (power_of_two_exponent(tok, e)) return std::ldexp(1.0, e);
  return parse_real(tok);
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

LambdaGrid LambdaGrid::geometric(double lo, double hi, double ratio) {
  if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("lambda grid: need 0 < lo <= hi");
  if (!(ratio > 1.0)) throw std::invalid_argument("lambda grid: ratio must exceed 1");
  LambdaGrid out;
  for (double l = hi; l > lo; l /= ratio) out.lambdas.push_back(l);
  out.lambdas.push_back(lo);
  return out;
}

LambdaGrid LambdaGrid::for_field(const MaximalField& field, double ratio, bool include_field_values) {
  const double hi = field.max();
  if (!(hi > 0.0)) throw std::invalid_argument("lambda grid: field is identically zero");
  const double lo = 0.01 * hi;
  auto out = geometric(lo, hi, ratio);
  if (include_field_values) {
    for (double v : field.values) {
      if (v >= lo) out.lambdas.push_back(v);
    }
  }
  std::sort(out.lambdas.begin(), out.lambdas.end(), std::greater<>());
  out.lambdas.erase(std::unique(out.lambdas.begin(), out.lambdas.end()), out.lambdas.end());
  return out;
}

WeakTypeReport weak_type_constant(const SampledFunction& f, const SampledFunction& g,
                                  const MaximalField& field, const LambdaGrid& lambdas) {
  const double norm = lp_norm(f, 2.0) * lp_norm(g, 2.0);
  if (!(norm > 0.0)) throw std::invalid_argument("weak_type_constant: f and g must be nonzero");
  if (lambdas.lambdas.empty()) throw std::invalid_argument("weak_type_constant: empty lambda grid");

  std::vector<double> sorted(field.values);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const double h = field.grid.h();

  WeakTypeReport r;
  r.operator_tag = field.tag.name();
  r.delta_or_jmax = field.tag.parameter;
  r.grid_n = field.grid.size();
  double best = -1.0;
  for (double lambda : lambdas.lambdas) {
    if (!(lambda > 0.0)) throw std::invalid_argument("weak_type_constant: lambda must be > 0");
    // count of values >= lambda in a descending array
    const auto it = std::partition_point(sorted.begin(), sorted.end(), [&](double v) { return v >= lambda; });
    const double value = lambda * static_cast<double>(it - sorted.begin()) * h;
    if (value > best) {
      best = value;
      r.lambda_star = lambda;
    }
  }
  r.constant = best / norm;

  double delta = std::numeric_limits<double>::quiet_NaN();
  if (field.tag.kind == OperatorKind::m_delta) delta = field.tag.parameter;
  if (field.tag.kind == OperatorKind::m_lac) delta = std::ldexp(1.0, -static_cast<int>(field.tag.parameter));
  r.log_bound = std::sqrt(std::log(1.0 / delta));
  r.trivial_bound = 1.0 / std::sqrt(delta);
  return r;
}

std::vector<FunctionPair> shipped_families(std::uint64_t seed) {
  return {
      {"constant", FunctionSpec::constant(1.0), FunctionSpec::constant(1.0)},
      {"indicator", FunctionSpec::indicator(-1.0, 1.0), FunctionSpec::indicator(-0.5, 2.0)},
      {"bump", FunctionSpec::bump(0.0, 1.5), FunctionSpec::bump(0.5, 1.0)},
      {"ramp", FunctionSpec::ramp(), FunctionSpec::indicator(0.0, 1.0)},
      {"random", FunctionSpec::random(seed), FunctionSpec::random(seed + 1)},
  };
}

FunctionPair family_by_name(const std::string& name, std::uint64_t seed) {
  for (auto& p : shipped_families(seed)) {
    if (p.name == name) return p;
  }
  throw std::invalid_argument("unknown function family '" + name + "'");
}

KeyValueConfig KeyValueConfig::parse(std::istream& in, const std::set<std::string>& allowed) {
  KeyValueConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (!allowed.count(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
    cfg.values_[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path, const std::set<std::string>& allowed) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  return parse(in, allowed);
}

std::vector<double> parse_delta_list(const std::string& text) {
  std::vector<double> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    int a = 0, b = 0;
    if (!power_of_two_exponent(trim(text.substr(0, dots)), a) ||
        !power_of_two_exponent(trim(text.substr(dots + 2)), b)) {
      throw std::invalid_argument("delta range must look like 2^-4..2^-9");
    }
    const int step = a <= b ? 1 : -1;
    for (int e = a;; e += step) {
      out.push_back(std::ldexp(1.0, e));
      if (e == b) break;
    }
  } else {
    for (const auto& tok : split(text, ',')) out.push_back(parse_delta_token(tok));
  }
  if (out.empty()) throw std::invalid_argument("empty delta list");
  for (double d : out) {
    if (!(d > 0.0 && d <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
  }
  return out;
}

std::vector<int> parse_int_range(const std::string& text) {
  std::vector<int> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const auto a = static_cast<int>(parse_integer(trim(text.substr(0, dots))));
    const auto b = static_cast<int>(parse_integer(trim(text.substr(dots + 2))));
    const int step = a <= b ? 1 : -1;
    for (int k = a;; k += step) {
      out.push_back(k);
      if (k == b) break;
    }
  } else {
    for (const auto& tok : split(text, ',')) out.push_back(static_cast<int>(parse_integer(tok)));
  }
  if (out.empty()) throw std::invalid_argument("empty integer list");
  return out;
}

const std::set<std::string>& SweepConfig::keys() {
  static const std::set<std::string> k = {"op",   "deltas", "jmax",      "family",
                                          "grid", "seed",   "theta_max", "work_budget"};
  return k;
}

void SweepConfig::apply(const KeyValueConfig& c) {
  if (c.has("op")) op = OperatorTag::parse_kind(c.get("op"));
  if (c.has("deltas")) deltas = parse_delta_list(c.get("deltas"));
  if (c.has("jmax")) jmax = parse_int_range(c.get("jmax"));
  if (c.has("family")) family = c.get("family");
  if (c.has("grid")) grid_n = parse_unsigned(c.get("grid"));
  if (c.has("seed")) seed = parse_unsigned(c.get("seed"));
  if (c.has("theta_max")) theta_max = parse_real(c.get("theta_max"));
  if (c.has("work_budget")) work_budget = parse_real(c.get("work_budget"));
}

std::vector<WeakTypeReport> sweep_delta(const SweepConfig& config) {
  const auto pair = family_by_name(config.family, config.seed);
  const auto grid = Grid1D::standard(config.grid_n);
  const auto f = sample_function(pair.f, grid);
  const auto g = sample_function(pair.g, grid);
  for (double delta : config.deltas) {
    const auto omega = DirectionSet::separated(delta, config.theta_max);
    const double work = static_cast<double>(omega.size()) * static_cast<double>(grid.size());
    if (work > config.work_budget) {
      throw std::invalid_argument("delta " + format_real(delta) +
                                  " below grid feasibility for the configured work budget");
    }
  }
  std::vector<WeakTypeReport> out;
  for (double delta : config.deltas) {
    const auto start = std::chrono::steady_clock::now();
    const auto omega = DirectionSet::separated(delta, config.theta_max);
    const auto field = m_delta(f, g, delta, omega);
    auto r = weak_type_constant(f, g, field, LambdaGrid::for_field(field));
    r.f_spec = pair.f.to_string();
    r.g_spec = pair.g.to_string();
    r.runtime_ms = elapsed_ms(start);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<WeakTypeReport> sweep_lacunary(const SweepConfig& config) {
  const auto pair = family_by_name(config.family, config.seed);
  const auto grid = Grid1D::standard(config.grid_n);
  const auto f = sample_function(pair.f, grid);
  const auto g = sample_function(pair.g, grid);
  int j_top = 0;
  for (int j : config.jmax) {
    if (j < 0) throw std::invalid_argument("jmax must be >= 0");
    j_top = std::max(j_top, j);
  }
  const auto shapes = ShapeSchedule::dyadic(grid);
  const double work = static_cast<double>(j_top + 1) * static_cast<double>(shapes.shapes.size()) *
                      static_cast<double>(grid.size());
  if (work > config.work_budget * 64.0) {
    throw std::invalid_argument("jmax exceeds the configured work budget");
  }

  const auto start = std::chrono::steady_clock::now();
  const auto per_direction = m_lac_by_direction(f, g, j_top, shapes);
  const double shared_ms = elapsed_ms(start);

  std::vector<WeakTypeReport> out;
  for (int J : config.jmax) {
    const auto t0 = std::chrono::steady_clock::now();
    MaximalField field = per_direction[0];
    for (int j = 1; j <= J; ++j) field = pointwise_max(field, per_direction[static_cast<std::size_t>(j)]);
    field.tag = {OperatorKind::m_lac, static_cast<double>(J)};
    auto r = weak_type_constant(f, g, field, LambdaGrid::for_field(field));
    r.f_spec = pair.f.to_string();
    r.g_spec = pair.g.to_string();
    r.runtime_ms = elapsed_ms(t0) + shared_ms * (J + 1) / (j_top + 1);
    out.push_back(std::move(r));
  }
  return out;
}

void write_reports_csv(std::ostream& out, std::span<const WeakTypeReport> reports) {
  out << "operator,delta_or_jmax,lambda_star,constant,log_bound,trivial_bound,f_spec,g_spec,grid_n,runtime_ms\n";
  for (const auto& r : reports) {
    out << r.operator_tag << ',' << format_real(r.delta_or_jmax) << ',' << format_real(r.lambda_star) << ','
        << format_real(r.constant) << ',' << format_real(r.log_bound) << ',' << format_real(r.trivial_bound)
        << ",\"" << r.f_spec << "\",\"" << r.g_spec << "\"," << r.grid_n << ',' << format_real(r.runtime_ms)
        << '\n';
  }
}

GrowthAssessment assess_growth(std::span<const WeakTypeReport> reports) {
  GrowthAssessment a;
  if (reports.empty()) return a;
  a.k0 = reports[0].constant / reports[0].log_bound;
  a.k1 = reports[0].constant / reports[0].trivial_bound;
  double prev = reports[0].constant / reports[0].trivial_bound;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const auto& r = reports[i];
    if (r.constant > a.k0 * r.log_bound * (1.0 + 1e-12)) a.log_bound_holds = false;
    if (r.constant > a.k1 * r.trivial_bound * (1.0 + 1e-12)) a.trivial_bound_holds = false;
    const double ratio = r.constant / r.trivial_bound;
    if (!(ratio < prev)) a.trivial_ratio_decreasing = false;
    prev = ratio;
  }
  return a;
}

TrialGenerator parse_generator(const std::string& name) {
  if (name == "unions" || name == "interval_unions") return TrialGenerator::interval_unions;
  if (name == "bumps") return TrialGenerator::bumps;
  if (name == "small_interval") return TrialGenerator::small_interval;
  if (name == "constant") return TrialGenerator::constant;
  throw std::invalid_argument("unknown generator '" + name + "'");
}

const std::set<std::string>& SharpnessConfig::keys() {
  static const std::set<std::string> k = {"delta", "budget", "seed", "grid", "theta_max", "generators"};
  return k;
}

void SharpnessConfig::apply(const KeyValueConfig& c) {
  if (c.has("delta")) delta = parse_delta_token(c.get("delta"));
  if (c.has("budget")) budget = parse_unsigned(c.get("budget"));
  if (c.has("seed")) seed = parse_unsigned(c.get("seed"));
  if (c.has("grid")) grid_n = parse_unsigned(c.get("grid"));
  if (c.has("theta_max")) theta_max = parse_real(c.get("theta_max"));
  if (c.has("generators")) {
    generators.clear();
    for (const auto& tok : split(c.get("generators"), ',')) generators.push_back(parse_generator(tok));
  }
}

double pair_constant(const FunctionSpec& fs, const FunctionSpec& gs, double delta, std::size_t grid_n,
                     double theta_max) {
  const auto grid = Grid1D::standard(grid_n);
  const auto f = sample_function(fs, grid);
  const auto g = sample_function(gs, grid);
  const auto field = m_delta(f, g, delta, DirectionSet::separated(delta, theta_max));
  if (!(field.max() > 0.0)) return 0.0;
  return weak_type_constant(f, g, field, LambdaGrid::for_field(field)).constant;
}

FunctionSpec draw_trial_function(TrialGenerator gen, std::mt19937_64& rng, double delta, double h) {
  const double lo = -kSupportRadius;
  const double hi = kSupportRadius;
  auto log_uniform = [&](double a, double b) { return std::exp(uniform(rng, std::log(a), std::log(b))); };
  switch (gen) {
    case TrialGenerator::interval_unions: {
      const int k = 1 + static_cast<int>(uniform01(rng) * 4.0);
      std::vector<std::pair<double, double>> pieces;
      for (int i = 0; i < k; ++i) {
        const double len = log_uniform(2.0 * h, 1.0);
        const double a = uniform(rng, lo, hi - len);
        pieces.emplace_back(a, a + len);
      }
      return FunctionSpec::interval_union(std::move(pieces));
    }
    case TrialGenerator::bumps: {
      const double w = log_uniform(std::max(2.0 * h, delta), 1.5);
      return FunctionSpec::bump(uniform(rng, lo + w, hi - w), w);
    }
    case TrialGenerator::small_interval: {
      const double a = uniform(rng, 0.5, 2.0);
      const double w = std::max(std::pow(delta, a), 2.0 * h);
      const double c = uniform(rng, lo + w / 2, hi - w / 2);
      return FunctionSpec::indicator(c - w / 2, c + w / 2);
    }
    case TrialGenerator::constant:
      return FunctionSpec::constant(1.0);
  }
  return FunctionSpec::constant(1.0);
}

SharpnessRecord sharpness_search(const SharpnessConfig& config) {
  if (config.budget == 0) throw std::invalid_argument("sharpness: zero trial budget");
  if (config.generators.empty()) throw std::invalid_argument("sharpness: no generators");
  if (!(config.delta > 0.0 && config.delta < 1.0)) throw std::invalid_argument("sharpness: delta must lie in (0, 1)");
  const auto grid = Grid1D::standard(config.grid_n);
  const auto omega = DirectionSet::separated(config.delta, config.theta_max);
  std::mt19937_64 rng(config.seed);

  SharpnessRecord rec;
  rec.delta = config.delta;
  rec.seed = config.seed;
  rec.grid_n = config.grid_n;
  rec.best_constant = -1.0;
  const auto n_gen = static_cast<double>(config.generators.size());
  for (std::size_t t = 0; t < config.budget; ++t) {
    auto pick = [&] {
      return config.generators[std::min(config.generators.size() - 1,
                                        static_cast<std::size_t>(uniform01(rng) * n_gen))];
    };
    const auto fs = draw_trial_function(pick(), rng, config.delta, grid.h());
    const auto gs = draw_trial_function(pick(), rng, config.delta, grid.h());
    const auto f = sample_function(fs, grid);
    const auto g = sample_function(gs, grid);
    ++rec.trials;
    if (f.is_zero() || g.is_zero()) {
      rec.running_best.push_back(std::max(rec.best_constant, 0.0));
      continue;
    }
    const auto field = m_delta(f, g, config.delta, omega);
    // disjoint supports far apart leave the field identically zero
    const double c =
        field.max() > 0.0 ? weak_type_constant(f, g, field, LambdaGrid::for_field(field)).constant : 0.0;
    if (c > rec.best_constant) {
      rec.best_constant = c;
      rec.best_f_spec = fs.to_string();
      rec.best_g_spec = gs.to_string();
    }
    rec.running_best.push_back(rec.best_constant);
  }
  rec.best_constant = std::max(rec.best_constant, 0.0);
  rec.normalized_constant = rec.best_constant / std::sqrt(std::log(1.0 / config.delta));
  return rec;
}

nlohmann::ordered_json to_json(const SharpnessRecord& r) {
  nlohmann::ordered_json j;
  j["best_constant"] = r.best_constant;
  j["best_f_spec"] = r.best_f_spec;
  j["best_g_spec"] = r.best_g_spec;
  j["delta"] = r.delta;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["grid_n"] = r.grid_n;
  j["normalized_constant"] = r.normalized_constant;
  j["running_best"] = r.running_best;
  return j;
}

}  // namespace bilmax
