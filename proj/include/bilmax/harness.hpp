#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "bilmax/maximal.hpp"
#include "bilmax/sampling.hpp"
#include "json.hpp"

namespace bilmax {

inline const double kLambdaRatio = std::exp2(0.25);

// Thresholds scanned by the weak-type measurement, descending.
struct LambdaGrid {
  std::vector<double> lambdas;

  // hi, hi / ratio, ... down to lo (lo itself included).
  static LambdaGrid geometric(double lo, double hi, double ratio = kLambdaRatio);
  // Geometric over [0.01 max, max] merged with every field value in that
  // range; the latter makes the scanned maximum the exact sup of
  // lambda |{field >= lambda}| over the span.
  static LambdaGrid for_field(const MaximalField& field, double ratio = kLambdaRatio,
                              bool include_field_values = true);
};

struct WeakTypeReport {
  std::string operator_tag;
  double delta_or_jmax = 0.0;
  double lambda_star = 0.0;
  double constant = 0.0;  // sup_lambda lambda |E_lambda| / (||f||_2 ||g||_2)
  double log_bound = 0.0;      // log(1/delta)^(1/2)
  double trivial_bound = 0.0;  // delta^(-1/2)
  std::string f_spec;
  std::string g_spec;
  std::size_t grid_n = 0;
  double runtime_ms = 0.0;
};

// E_lambda = {field >= lambda}. Lacunary reports use delta = 2^-J_max in the
// bound columns; m1 and m_diag leave them NaN.
WeakTypeReport weak_type_constant(const SampledFunction& f, const SampledFunction& g,
                                  const MaximalField& field, const LambdaGrid& lambdas);

struct FunctionPair {
  std::string name;
  FunctionSpec f;
  FunctionSpec g;
};

// constant, indicator, bump, ramp, random.
std::vector<FunctionPair> shipped_families(std::uint64_t seed = 1);
FunctionPair family_by_name(const std::string& name, std::uint64_t seed = 1);

// Plain-text key=value lines; '#' starts a comment. Unknown keys are rejected.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in, const std::set<std::string>& allowed);
  static KeyValueConfig load(const std::string& path, const std::set<std::string>& allowed);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& get(const std::string& key) const { return values_.at(key); }

 private:
  std::map<std::string, std::string> values_;
};

// "2^-4..2^-9", or a comma list of reals / 2^-k tokens.
std::vector<double> parse_delta_list(const std::string& text);
// "4..10", or a comma list of integers.
std::vector<int> parse_int_range(const std::string& text);

struct SweepConfig {
  OperatorKind op = OperatorKind::m_delta;
  std::vector<double> deltas = parse_delta_list("2^-4..2^-9");
  std::vector<int> jmax = parse_int_range("4..10");
  std::string family = "constant";
  std::size_t grid_n = kDefaultGridSize;
  std::uint64_t seed = 1;
  double theta_max = std::numbers::pi / 4;
  // Upper bound on rectangles per field (directions x grid points).
  double work_budget = 5e7;

  static const std::set<std::string>& keys();
  void apply(const KeyValueConfig& config);
};

std::vector<WeakTypeReport> sweep_delta(const SweepConfig& config);
std::vector<WeakTypeReport> sweep_lacunary(const SweepConfig& config);

void write_reports_csv(std::ostream& out, std::span<const WeakTypeReport> reports);

// Calibrates K0 = c / log_bound and K1 = c / trivial_bound on the first
// report (the coarsest delta) and checks the rest against them.
struct GrowthAssessment {
  double k0 = 0.0;
  double k1 = 0.0;
  bool log_bound_holds = true;
  bool trivial_bound_holds = true;
  bool trivial_ratio_decreasing = true;  // constant * delta^(1/2) strictly decreasing
};
GrowthAssessment assess_growth(std::span<const WeakTypeReport> reports);

enum class TrialGenerator { interval_unions, bumps, small_interval, constant };
TrialGenerator parse_generator(const std::string& name);

struct SharpnessConfig {
  double delta = 0x1.0p-6;
  std::size_t budget = 16;
  std::uint64_t seed = 1;
  std::size_t grid_n = std::size_t{1} << 12;
  double theta_max = std::numbers::pi / 4;
  std::vector<TrialGenerator> generators = {TrialGenerator::interval_unions, TrialGenerator::bumps,
                                            TrialGenerator::small_interval};

  static const std::set<std::string>& keys();
  void apply(const KeyValueConfig& config);
};

struct SharpnessRecord {
  double best_constant = 0.0;
  std::string best_f_spec;
  std::string best_g_spec;
  double delta = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::size_t grid_n = 0;
  double normalized_constant = 0.0;  // best_constant / log(1/delta)^(1/2)
  std::vector<double> running_best;  // after each trial
};

// Weak-type constant of M_delta for one pair.
double pair_constant(const FunctionSpec& f, const FunctionSpec& g, double delta, std::size_t grid_n,
                     double theta_max = std::numbers::pi / 4);

// Draws a random function of the given family.
FunctionSpec draw_trial_function(TrialGenerator gen, std::mt19937_64& rng, double delta, double h);

SharpnessRecord sharpness_search(const SharpnessConfig& config);

nlohmann::ordered_json to_json(const SharpnessRecord& record);

}  // namespace bilmax
