// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit on any failure.
// argv[1] is the path of the bilmax CLI binary.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "bilmax/covering.hpp"
#include "bilmax/harness.hpp"
#include "bilmax/tensor_integrator.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace bilmax;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome tensor_factorization() {
  Outcome out;
  std::mt19937_64 rng(20);
  const auto grid = Grid1D::standard(2048);
  double worst = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    const TensorFunction F(gen::raw_function(rng, grid), gen::function(rng, grid));
    for (double p : {1.0, 2.0, 4.0}) {
      const double rhs = lp_norm(F.f(), p) * lp_norm(F.g(), p);
      const double rel = std::abs(tensor_lp_norm(F, p) - rhs) / rhs;
      worst = std::max(worst, rel);
    }
  }
  out.pass = worst <= 1e-12;
  out.detail = "max relative error " + fmt("%.3g", worst);
  return out;
}

Outcome hardy_littlewood() {
  Outcome out;
  const auto grid = Grid1D::standard(2048);
  const auto radii = RadiusSchedule::for_grid(grid);
  const auto ind = sample_function(FunctionSpec::indicator(0.0, 1.0), grid);
  const double at_two = m1_at(CumulativeIntegrals(ind), 2.0, radii);
  double brute = 0.0;
  for (int k = 1; k <= 20000; ++k) brute = std::max(brute, oracle::window_average(ind, 2.0, 10.0 * k / 20000));
  const bool example = std::abs(at_two - 0.25) <= 0.02 * 0.25 && std::abs(brute - 0.25) <= 0.02 * 0.25 &&
                       std::abs(at_two - brute) <= 0.02 * brute;

  std::mt19937_64 rng(21);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = gen::function(rng, grid);
    const auto field = m1_maximal(f, radii);
    const double norm1 = lp_norm(f, 1.0);
    for (int k = 1; k <= 10; ++k) {
      const double lambda = field.max() * k / 11.0;
      worst = std::max(worst, lambda * superlevel_measure(field, lambda).measure / norm1);
    }
  }
  out.pass = example && worst <= 10.0;
  out.detail = "M_1(ind[0,1])(2) = " + fmt("%.5f", at_two) + ", oracle " + fmt("%.5f", brute) +
               ", max lambda|{M_1 f > lambda}|/|f|_1 = " + fmt("%.4f", worst);
  return out;
}

std::vector<std::pair<FunctionSpec, FunctionSpec>> domination_pairs() {
  std::mt19937_64 rng(22);
  std::vector<std::pair<FunctionSpec, FunctionSpec>> pairs;
  for (int k = 0; k < 10; ++k) pairs.emplace_back(gen::function_spec(rng), gen::function_spec(rng));
  return pairs;
}

double domination_constant(std::size_t n, const std::vector<std::pair<FunctionSpec, FunctionSpec>>& pairs,
                           std::size_t& unbounded) {
  const auto grid = Grid1D::standard(n);
  const auto radii = RadiusSchedule::for_grid(grid);
  const auto sched = ParallelogramSchedule::dyadic(grid);
  double c = 0.0;
  for (const auto& [fs_, gs_] : pairs) {
    const auto f = sample_function(fs_, grid);
    const auto g = sample_function(gs_, grid);
    const auto rep = domination_report(m_diag(f, g, sched), nested_m1(f, g, radii), INFINITY);
    c = std::max(c, rep.max_ratio);
    unbounded += rep.unbounded;
  }
  return c;
}

Outcome domination() {
  Outcome out;
  const auto pairs = domination_pairs();
  std::size_t unbounded = 0;
  const double c12 = domination_constant(4096, pairs, unbounded);
  const double c13 = domination_constant(8192, pairs, unbounded);
  out.pass = unbounded == 0 && std::isfinite(c12) && std::abs(c13 - c12) <= 0.2 * c12;
  out.detail = "C(2^12) = " + fmt("%.5f", c12) + ", C(2^13) = " + fmt("%.5f", c13) +
               ", points with zero right side " + std::to_string(unbounded);
  return out;
}

Outcome enclosure() {
  Outcome out;
  std::mt19937_64 rng(23);
  double worst = 0.0;
  std::size_t missed = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double delta = std::exp2(-gen::uniform(rng, 3.0, 9.0));
    const Rectangle r(gen::uniform(rng, -2.0, 2.0), gen::uniform(rng, -4.0, 4.0) * delta, 1.0, delta);
    const auto p = enclosing_parallelogram(r);
    for (int k = 0; k < 10000; ++k) {
      missed += !p.contains(r.at(gen::uniform(rng, -0.5, 0.5), gen::uniform(rng, -delta / 2, delta / 2)));
    }
    worst = std::max(worst, p.area() / r.area());
  }
  out.pass = missed == 0 && worst < 1000.0;
  out.detail = "C1 = max |P|/|R| = " + fmt("%.4f", worst) + ", points outside " + std::to_string(missed);
  return out;
}

Outcome vitali() {
  Outcome out;
  std::mt19937_64 rng(24);
  int bad = 0;
  double worst_share = INFINITY;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto family = gen::intervals(rng, gen::uniform_int(rng, 1, 40));
    const auto kept = vitali_select(family);
    const double share = union_measure(kept) / union_measure(family);
    worst_share = std::min(worst_share, share);
    bad += !oracle::pairwise_disjoint(kept) || share < 1.0 / 3.0 - 1e-12;
  }
  double worst_vs_optimal = INFINITY;
  for (int trial = 0; trial < 300; ++trial) {
    const auto family = gen::intervals(rng, gen::uniform_int(rng, 1, 12));
    const double greedy = union_measure(vitali_select(family));
    const double best = oracle::optimal_packing(family);
    worst_vs_optimal = std::min(worst_vs_optimal, greedy / best);
    bad += greedy > best * (1 + 1e-12) || greedy < union_measure(family) / 3.0 * (1 - 1e-12);
  }
  out.pass = bad == 0;
  out.detail = "min kept/union " + fmt("%.4f", worst_share) + ", min greedy/optimal " +
               fmt("%.4f", worst_vs_optimal) + ", violations " + std::to_string(bad);
  return out;
}

Outcome cordoba() {
  Outcome out;
  std::string ratios;
  double prev = 0.0, worst_growth = 0.0, worst_refine = 0.0;
  for (int k = 4; k <= 8; ++k) {
    const double delta = std::ldexp(1.0, -k);
    const auto fan = rectangle_fan(0.0, DirectionSet::separated(delta), delta);
    const auto coarse = overlap_l2_norm(fan, delta / 8);
    const auto fine = overlap_l2_norm(fan, delta / 16);
    worst_refine = std::max(worst_refine, std::abs(coarse.overlap_l2 - fine.overlap_l2) / fine.overlap_l2);
    if (prev > 0.0) worst_growth = std::max(worst_growth, coarse.cordoba_ratio / prev - 1.0);
    prev = coarse.cordoba_ratio;
    ratios += (ratios.empty() ? "" : " ") + fmt("%.4f", coarse.cordoba_ratio);
  }
  out.pass = worst_growth < 0.25 && worst_refine < 0.02;
  out.detail = "ratios [" + ratios + "], max growth per halving " + fmt("%.4f", worst_growth) +
               ", max refinement change " + fmt("%.4f", worst_refine);
  return out;
}

Outcome growth_rate() {
  Outcome out;
  std::string detail;
  for (const auto& pair : shipped_families()) {
    SweepConfig cfg;
    cfg.family = pair.name;
    const auto reports = sweep_delta(cfg);
    const auto a = assess_growth(reports);
    const bool ok = a.log_bound_holds && a.trivial_ratio_decreasing;
    out.pass = out.pass && ok;
    detail += (detail.empty() ? "" : "; ") + pair.name + " K0 " + fmt("%.4f", a.k0) + " C(2^-9) " +
              fmt("%.4f", reports.back().constant) + (ok ? "" : " FAILED");
  }
  out.detail = detail;
  return out;
}

Outcome lacunary() {
  Outcome out;
  std::string detail;
  for (const auto& pair : shipped_families()) {
    SweepConfig cfg;
    cfg.op = OperatorKind::m_lac;
    cfg.family = pair.name;
    cfg.jmax = parse_int_range("6..10");
    const auto reports = sweep_lacunary(cfg);
    const double growth = reports.back().constant / reports.front().constant - 1.0;
    out.pass = out.pass && growth <= 0.15;
    detail += (detail.empty() ? "" : "; ") + pair.name + " " + fmt("%+.4f", growth);
  }
  out.detail = "growth J=6 to 10: " + detail;
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism(const std::string& cli) {
  Outcome out;
  if (cli.empty()) return {false, "no CLI path given"};
  const fs::path dir = fs::temp_directory_path() / ("bilmax_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  {
    std::ofstream in(dir / "intervals.txt");
    in << "0,2\n1,3\n4,5\n4.5,4.75\n-1,0.5\n";
  }
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"compute.csv", "compute --op mdelta --f bump:0,1.5 --g bump:0.5,1 --delta 2^-5 --grid 1024"},
      {"compute_lac.csv", "compute --op mlac --f ramp --g indicator:0,1 --jmax 5 --grid 1024"},
      {"sweep.csv", "sweep --op mdelta --family random --seed 7 --deltas 2^-4..2^-6 --grid 1024"},
      {"sweep_lac.csv", "sweep --op mlac --family bump --jmax 0..5 --grid 1024"},
      {"sharpness.json", "sharpness --delta 2^-5 --budget 8 --seed 3 --grid 1024"},
      {"cordoba.csv", "cordoba --delta 2^-4..2^-6 --centers 2"},
      {"vitali.csv", "vitali --in " + (dir / "intervals.txt").string()},
  };
  int differing = 0;
  for (const auto& [file, args] : runs) {
    std::string outputs[2];
    for (int rep = 0; rep < 2; ++rep) {
      const auto path = dir / (std::to_string(rep) + "_" + file);
      const std::string cmd = "\"" + cli + "\" " + args + " --out \"" + path.string() + "\" > /dev/null";
      if (std::system(cmd.c_str()) != 0) {
        fs::remove_all(dir);
        return {false, "command failed: " + args};
      }
      outputs[rep] = slurp(path);
    }
    if (outputs[0].empty() || outputs[0] != outputs[1]) {
      ++differing;
      out.detail += " differs: " + file;
    }
  }
  fs::remove_all(dir);
  out.pass = differing == 0;
  out.detail = std::to_string(runs.size()) + " commands run twice, " + std::to_string(differing) +
               " differing outputs" + out.detail;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"tensor norm factorization", tensor_factorization},
      {"Hardy-Littlewood oracle and weak (1,1)", hardy_littlewood},
      {"pointwise domination of M_D", domination},
      {"parallelogram enclosure", enclosure},
      {"Vitali selection", vitali},
      {"Cordoba overlap ratio", cordoba},
      {"growth rate across delta", growth_rate},
      {"lacunary boundedness", lacunary},
      {"CLI determinism", [&] { return determinism(cli); }},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s criterion %zu (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
