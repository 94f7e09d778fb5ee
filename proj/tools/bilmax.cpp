// Command-line front end: compute, sweep, sharpness, cordoba, vitali, region.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bilmax/covering.hpp"
#include "bilmax/geometry.hpp"
#include "bilmax/harness.hpp"
#include "bilmax/maximal.hpp"
#include "bilmax/sampling.hpp"

namespace {

using namespace bilmax;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Writes to the named file, or stdout for "" and "-".
template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  fn(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bilinear maximal operator experiments"};
  app.require_subcommand(1);

  // compute
  auto* compute = app.add_subcommand("compute", "Evaluate a maximal operator on the grid");
  std::string c_op = "mdelta", c_f = "indicator:-1,1", c_g = "indicator:-1,1", c_out;
  std::string c_delta = "2^-6";
  int c_jmax = 6;
  std::size_t c_grid = kDefaultGridSize;
  compute->add_option("--op", c_op, "m1 | mdelta | mlac | mdiag")->check(CLI::IsMember({"m1", "mdelta", "mlac", "mdiag"}));
  compute->add_option("--f", c_f, "function spec for f");
  compute->add_option("--g", c_g, "function spec for g (unused by m1)");
  compute->add_option("--delta", c_delta, "delta for mdelta");
  compute->add_option("--jmax", c_jmax, "J for mlac");
  compute->add_option("--grid", c_grid, "grid size");
  compute->add_option("--out", c_out, "output CSV (stdout if omitted)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Weak-type constants across delta or J");
  std::string s_op = "mdelta", s_deltas, s_jmax, s_family, s_out, s_config;
  std::size_t s_grid = 0;
  std::uint64_t s_seed = 0;
  bool s_runtime = false;
  sweep->add_option("--op", s_op, "mdelta | mlac")->check(CLI::IsMember({"mdelta", "mlac"}));
  sweep->add_option("--deltas", s_deltas, "e.g. 2^-4..2^-9");
  sweep->add_option("--jmax", s_jmax, "e.g. 4..10");
  sweep->add_option("--family", s_family, "constant | indicator | bump | ramp | random");
  sweep->add_option("--grid", s_grid, "grid size");
  sweep->add_option("--seed", s_seed, "seed for the random family");
  sweep->add_option("--config", s_config, "key=value config file");
  sweep->add_option("--out", s_out, "output CSV");
  sweep->add_flag("--record-runtime", s_runtime, "fill runtime_ms (otherwise 0, so output is reproducible)");

  // sharpness
  auto* sharp = app.add_subcommand("sharpness", "Random search for large weak-type constants");
  std::string sh_delta, sh_out, sh_config;
  std::size_t sh_budget = 0;
  std::size_t sh_grid = 0;
  std::uint64_t sh_seed = 0;
  sharp->add_option("--delta", sh_delta, "delta, e.g. 2^-6");
  sharp->add_option("--budget", sh_budget, "number of trials");
  sharp->add_option("--seed", sh_seed, "RNG seed");
  sharp->add_option("--grid", sh_grid, "grid size");
  sharp->add_option("--config", sh_config, "key=value config file");
  sharp->add_option("--out", sh_out, "output JSON");

  // cordoba
  auto* cordoba = app.add_subcommand("cordoba", "Overlap norm of rectangle fans");
  std::string co_deltas = "2^-4..2^-8", co_out;
  int co_centers = 1;
  double co_resolution = 8.0;
  cordoba->add_option("--delta", co_deltas, "delta or list, e.g. 2^-4..2^-8");
  cordoba->add_option("--centers", co_centers, "number of fans, centered 1.5 apart along the diagonal");
  cordoba->add_option("--resolution", co_resolution, "lattice spacing is delta / resolution (>= 8)");
  cordoba->add_option("--out", co_out, "output CSV");

  // vitali
  auto* vitali = app.add_subcommand("vitali", "Vitali selection of intervals given as lo,hi lines");
  std::string v_in, v_out;
  vitali->add_option("--in", v_in, "input file (stdin if omitted)");
  vitali->add_option("--out", v_out, "output CSV");

  // region
  auto* region = app.add_subcommand("region", "Print a region as JSON");
  std::string r_kind = "rectangle";
  double r_x = 0.0, r_angle = 0.0, r_length = 1.0, r_width = 0.1;
  region->add_option("--kind", r_kind, "rectangle | parallelogram")->check(CLI::IsMember({"rectangle", "parallelogram"}));
  region->add_option("--x", r_x, "center (x, x)");
  region->add_option("--angle", r_angle, "angle from the diagonal (rectangle)");
  region->add_option("--length", r_length, "length L, or half-length l");
  region->add_option("--width", r_width, "width W, or half-height w");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*compute) {
      const auto grid = Grid1D::standard(c_grid);
      const auto f = sample_function(FunctionSpec::parse(c_f), grid);
      const auto g = sample_function(FunctionSpec::parse(c_g), grid);
      const auto field = [&]() -> MaximalField {
        switch (OperatorTag::parse_kind(c_op)) {
          case OperatorKind::m1: return m1_maximal(f, RadiusSchedule::for_grid(grid));
          case OperatorKind::m_diag: return m_diag(f, g, ParallelogramSchedule::dyadic(grid));
          case OperatorKind::m_delta: {
            const double delta = parse_delta_list(c_delta).at(0);
            return m_delta(f, g, delta, DirectionSet::separated(delta));
          }
          case OperatorKind::m_lac: return m_lac(f, g, c_jmax, ShapeSchedule::dyadic(grid));
        }
        throw std::logic_error("unreachable");
      }();
      with_output(c_out, [&](std::ostream& out) {
        out << "x,value,witness_angle,witness_length,witness_width\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
          const auto& w = field.witness[i];
          out << fmt(grid.point(i)) << ',' << fmt(field.values[i]) << ',' << fmt(w.angle) << ','
              << fmt(w.length) << ',' << fmt(w.width) << '\n';
        }
      });
    } else if (*sweep) {
      SweepConfig cfg;
      if (!s_config.empty()) cfg.apply(KeyValueConfig::load(s_config, SweepConfig::keys()));
      cfg.op = OperatorTag::parse_kind(s_op);
      if (!s_deltas.empty()) cfg.deltas = parse_delta_list(s_deltas);
      if (!s_jmax.empty()) cfg.jmax = parse_int_range(s_jmax);
      if (!s_family.empty()) cfg.family = s_family;
      if (s_grid) cfg.grid_n = s_grid;
      if (sweep->count("--seed")) cfg.seed = s_seed;
      auto reports = cfg.op == OperatorKind::m_lac ? sweep_lacunary(cfg) : sweep_delta(cfg);
      if (!s_runtime) {
        for (auto& r : reports) r.runtime_ms = 0.0;
      }
      with_output(s_out, [&](std::ostream& out) { write_reports_csv(out, reports); });
    } else if (*sharp) {
      SharpnessConfig cfg;
      if (!sh_config.empty()) cfg.apply(KeyValueConfig::load(sh_config, SharpnessConfig::keys()));
      if (!sh_delta.empty()) cfg.delta = parse_delta_list(sh_delta).at(0);
      if (sharp->count("--budget")) cfg.budget = sh_budget;
      if (sh_grid) cfg.grid_n = sh_grid;
      if (sharp->count("--seed")) cfg.seed = sh_seed;
      const auto record = sharpness_search(cfg);
      with_output(sh_out, [&](std::ostream& out) { out << to_json(record).dump(2) << '\n'; });
    } else if (*cordoba) {
      if (co_centers < 1) throw std::invalid_argument("centers must be >= 1");
      if (!(co_resolution >= 8.0)) throw std::invalid_argument("resolution must be >= 8");
      const auto deltas = parse_delta_list(co_deltas);
      with_output(co_out, [&](std::ostream& out) {
        out << "delta,n_rects,sum_area,overlap_l2,cordoba_ratio\n";
        for (double delta : deltas) {
          std::vector<Rectangle> rects;
          for (int k = 0; k < co_centers; ++k) {
            const double x = 1.5 * (k - 0.5 * (co_centers - 1));
            for (auto& r : rectangle_fan(x, DirectionSet::separated(delta), delta)) rects.push_back(r);
          }
          const auto r = overlap_l2_norm(rects, delta / co_resolution);
          out << fmt(r.delta) << ',' << r.n_rects << ',' << fmt(r.sum_area) << ',' << fmt(r.overlap_l2) << ','
              << fmt(r.cordoba_ratio) << '\n';
        }
      });
    } else if (*vitali) {
      std::ifstream file;
      if (!v_in.empty()) {
        file.open(v_in);
        if (!file) throw std::runtime_error("cannot open '" + v_in + "'");
      }
      std::istream& in = v_in.empty() ? std::cin : file;
      std::vector<Interval> intervals;
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        Interval I{};
        if (!(ss >> I.lo >> I.hi)) throw std::invalid_argument("vitali: bad line '" + line + "'");
        intervals.push_back(I);
      }
      const auto kept = vitali_select(intervals);
      const double total = union_measure(intervals);
      const double picked = union_measure(kept);
      with_output(v_out, [&](std::ostream& out) {
        out << "lo,hi\n";
        for (const auto& I : kept) out << fmt(I.lo) << ',' << fmt(I.hi) << '\n';
        out << "# coverage_ratio," << fmt(total > 0 ? picked / total : 1.0) << '\n';
      });
    } else if (*region) {
      Region r = r_kind == "rectangle" ? Region{rectangle_at(r_x, r_angle, r_length, r_width)}
                                       : Region{parallelogram_at(r_x, r_length, r_width)};
      std::cout << region_to_json(r).dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
