// Command-line front end: builds the hierarchical density, verifies its
// integral constraints, evaluates the distortion-bound machinery, runs the
// transport probe, and exports separated nets. All outputs are plain CSV,
// JSON, and PGM files, deterministic for a fixed configuration and seed.

#include "mcm/bounds.hpp"
#include "mcm/density.hpp"
#include "mcm/io.hpp"
#include "mcm/nets.hpp"
#include "mcm/probe.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace mcm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitViolation = 3;

struct CliOptions {
  std::string delta = "1/3";
  std::string gamma = "1/100";
  std::string branching;  // comma-separated; empty -> default schedule
  int depth = 2;
  bool strict = false;
  std::string out = ".";
  unsigned long seed = 1;
};

[[noreturn]] void config_error(const std::string& message) {
  Json err;
  err["error"] = message;
  err["code"] = kExitConfig;
  std::cerr << err.dump() << '\n';
  std::exit(kExitConfig);
}

std::vector<long> parse_branching(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stol(item));
  }
  return out;
}

// Default schedule: n_2 is the smallest multiple of 7 strictly exceeding
// both 2/(1-delta) and 4/gamma, then each level at least doubles. The
// 4/gamma floor keeps a real margin in the annulus positivity constraint
// (gamma > 4/n > (4n-4)/n^2), so s_j stays well away from 0.
std::vector<long> default_branching(const Rat& delta, const Rat& gamma, int depth) {
  std::vector<long> out;
  long n = 7;
  auto valid = [&](long cand) {
    return Rat(cand) * (1 - delta) > 2 && Rat(cand) * gamma > 4;
  };
  for (int j = 2; j <= depth; ++j) {
    if (!out.empty()) n = ((2 * out.back() + 6) / 7) * 7;
    while (!valid(n)) n += 7;
    out.push_back(n);
  }
  return out;
}

ConstructionParams params_from(const CliOptions& opt) {
  ConstructionParams p;
  try {
    p.delta = parse_rational(opt.delta);
    p.gamma = parse_rational(opt.gamma);
  } catch (const std::exception& e) {
    config_error(e.what());
  }
  p.depth = opt.depth;
  p.strict_proof_mode = opt.strict;
  if (!opt.branching.empty()) {
    try {
      p.branching = parse_branching(opt.branching);
    } catch (const std::exception& e) {
      config_error(std::string("bad --branching: ") + e.what());
    }
  } else if (opt.depth > 1) {
    p.branching = default_branching(p.delta, p.gamma, p.depth);
  }
  return p;
}

DensitySpec spec_or_exit(const ConstructionParams& params) {
  const ValidationReport rep = validate_params(params);
  if (!rep.ok) {
    Json err;
    err["error"] = "invalid construction parameters";
    err["code"] = kExitConfig;
    err["validation"] = validation_json(rep);
    std::cerr << err.dump() << '\n';
    std::exit(kExitConfig);
  }
  return make_density_spec(params);
}

fs::path out_dir(const CliOptions& opt) {
  fs::path dir(opt.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) config_error("cannot create output directory: " + dir.string());
  return dir;
}

PointR parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("point must be 'x,y'");
  return PointR{parse_rational(text.substr(0, comma)), parse_rational(text.substr(comma + 1))};
}

RectR parse_rect(const std::string& text) {
  std::stringstream ss(text);
  std::string item;
  std::vector<Rat> v;
  while (std::getline(ss, item, ',')) v.push_back(parse_rational(item));
  if (v.size() != 4) throw std::invalid_argument("rect must be 'x0,y0,x1,y1'");
  return RectR{v[0], v[1], v[2], v[3]};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hierarchical density construction, verification, and distortion probes"};
  app.require_subcommand(1);

  CliOptions opt;
  app.add_option("--delta", opt.delta, "core ratio, fraction p/q or decimal");
  app.add_option("--gamma", opt.gamma, "mass deficit, fraction p/q or decimal");
  app.add_option("--branching", opt.branching, "comma-separated n_2,n_3,... (default: derived schedule)");
  app.add_option("--depth", opt.depth, "construction depth J")->check(CLI::PositiveNumber);
  app.add_flag("--strict", opt.strict, "enforce the proof-mode parameter ranges");
  app.add_option("--out", opt.out, "output directory");
  app.add_option("--seed", opt.seed, "seed for randomized diagnostics");

  auto* cmd_build = app.add_subcommand("build", "solve level values, emit table and validation report");

  std::string eval_point = "1/2,1/2";
  int at_depth = 0;  // 0 -> construction depth
  auto* cmd_eval = app.add_subcommand("eval", "evaluate the density at a point");
  cmd_eval->add_option("--point", eval_point, "evaluation point 'x,y' (exact rationals)");
  cmd_eval->add_option("--at-depth", at_depth, "evaluation depth (default: construction depth)");

  std::string rect_text = "0,0,1,1";
  auto* cmd_integrate = app.add_subcommand("integrate", "exact integral over a rectangle");
  cmd_integrate->add_option("--rect", rect_text, "rectangle 'x0,y0,x1,y1' (exact rationals)");
  cmd_integrate->add_option("--at-depth", at_depth, "integration depth (default: construction depth)");

  int resolution = 64;
  std::string raster_mode = "cell-average";
  auto* cmd_raster = app.add_subcommand("raster", "sample the density to PGM and CSV");
  cmd_raster->add_option("--resolution", resolution, "grid resolution");
  cmd_raster->add_option("--mode", raster_mode, "center-sample | cell-average")
      ->check(CLI::IsMember({"center-sample", "cell-average"}));
  cmd_raster->add_option("--at-depth", at_depth, "raster depth (default: construction depth)");

  long geo_budget = 4096;
  auto* cmd_verify = app.add_subcommand("verify", "verify the exact integral constraints");
  cmd_verify->add_option("--geo-budget", geo_budget, "per-level geometric audit budget");

  double bounds_K = 2;
  std::string n_grid = "700,7000,70000,700000,7000000";
  auto* cmd_bounds = app.add_subcommand("bounds", "contradiction witness and excluded-stretch table");
  cmd_bounds->add_option("--K", bounds_K, "stretch constant for the witness search");
  cmd_bounds->add_option("--N-grid", n_grid, "comma-separated N values for the K* table");

  int probe_res = 128;
  std::string direction = "forward";
  long pair_budget = 20000;
  double probe_K = 0;      // 0 -> measured from the covered edge
  double probe_alpha = 0;  // 0 -> quarter of the admissible sup
  bool dump_map = false;
  auto* cmd_probe = app.add_subcommand("probe", "transport rearrangement and distortion diagnostics");
  cmd_probe->add_option("--resolution", probe_res, "lattice resolution m");
  cmd_probe->add_option("--direction", direction, "forward | inverse")
      ->check(CLI::IsMember({"forward", "inverse"}));
  cmd_probe->add_option("--pairs", pair_budget, "random pair budget for the stretch scan");
  cmd_probe->add_option("--K", probe_K, "stretch constant for the replay (default: measured)");
  cmd_probe->add_option("--alpha", probe_alpha, "slack parameter for the replay");
  cmd_probe->add_flag("--dump-map", dump_map, "also write the full vertex lattice CSV");

  long net_scale = 64;
  bool match_lattice = false;
  long max_points = 3000;
  auto* cmd_net = app.add_subcommand("net", "separated net generation and stats");
  cmd_net->add_option("--scale", net_scale, "target points per unit length k");
  cmd_net->add_flag("--match-lattice", match_lattice, "match against a uniform net and report distortion");
  cmd_net->add_option("--max-points", max_points, "assignment size cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    Json err;
    err["error"] = e.what();
    err["code"] = kExitConfig;
    std::cerr << err.dump() << '\n';
    return kExitConfig;
  }

  const ConstructionParams params = params_from(opt);
  const fs::path dir = out_dir(opt);

  try {
    if (cmd_build->parsed()) {
      const ValidationReport rep = validate_params(params);
      write_text_file((dir / "validation.json").string(), validation_json(rep).dump(2) + "\n");
      if (!rep.ok) {
        Json err;
        err["error"] = "invalid construction parameters";
        err["code"] = kExitConfig;
        err["validation"] = validation_json(rep);
        std::cerr << err.dump() << '\n';
        return kExitConfig;
      }
      const DensitySpec spec = make_density_spec(params);
      write_text_file((dir / "levels.csv").string(), levels_csv(spec));
      std::cout << levels_csv(spec);
      return kExitOk;
    }

    const DensitySpec spec = spec_or_exit(params);
    const int d = at_depth > 0 ? at_depth : params.depth;

    if (cmd_eval->parsed()) {
      PointR p;
      try {
        p = parse_point(eval_point);
      } catch (const std::exception& e) {
        config_error(e.what());
      }
      const DensityValue v = evaluate(spec, p, d);
      Json j;
      j["value"] = {{"fraction", fraction_string(v.value)}, {"decimal", decimal_string(v.value)}};
      j["birth_level"] = v.birth;
      std::cout << j.dump(2) << '\n';
      return kExitOk;
    }

    if (cmd_integrate->parsed()) {
      RectR r;
      try {
        r = parse_rect(rect_text);
      } catch (const std::exception& e) {
        config_error(e.what());
      }
      const Rat mass = integrate(spec, r, d);
      std::cout << fraction_string(mass) << " = " << decimal_string(mass) << '\n';
      return kExitOk;
    }

    if (cmd_raster->parsed()) {
      const RasterMode mode =
          raster_mode == "center-sample" ? RasterMode::CenterSample : RasterMode::CellAverage;
      const std::vector<Rat> grid = raster(spec, resolution, d, mode);
      // bounds of rho at the rastered depth
      Rat lo = spec.values.s_at(1), hi = spec.values.t_at(1);
      for (int j = 2; j <= d; ++j) {
        lo = std::min(lo, spec.values.s_at(j));
        hi = std::max(hi, spec.values.t_at(j));
      }
      const DensityBounds bounds{lo, hi, 0, 0};
      write_text_file((dir / "density.csv").string(), raster_csv(grid, resolution));
      write_text_file((dir / "density.pgm").string(),
                      raster_pgm(grid, resolution, bounds.min_value, bounds.max_value));
      write_text_file((dir / "raster.json").string(),
                      raster_sidecar(spec, resolution, d, raster_mode, bounds.min_value,
                                     bounds.max_value)
                              .dump(2) +
                          "\n");
      return kExitOk;
    }

    if (cmd_verify->parsed()) {
      const ConstraintReport rep = verify_constraints(spec, d, geo_budget);
      write_text_file((dir / "constraints.json").string(), constraint_json(rep).dump(2) + "\n");
      std::cout << rep.units_checked << " units checked, " << rep.violations.size()
                << " violations\n";
      return rep.ok() ? kExitOk : kExitViolation;
    }

    if (cmd_bounds->parsed()) {
      const double delta = to_double(params.delta);
      const double gamma = to_double(params.gamma);
      const auto witness = find_witness(delta, gamma, bounds_K);
      Json j = witness ? witness_json(*witness) : Json{{"found", false}};
      if (witness) j["found"] = true;
      write_text_file((dir / "witness.json").string(), j.dump(2) + "\n");

      std::ostringstream table;
      table << "N,K_star\n";
      for (long n : parse_branching(n_grid)) {
        table << n << ',' << excluded_stretch(delta, gamma, n) << '\n';
      }
      write_text_file((dir / "kstar.csv").string(), table.str());
      std::cout << j.dump(2) << '\n';
      return witness && witness->contradiction ? kExitOk : kExitViolation;
    }

    if (cmd_probe->parsed()) {
      const MapDirection dir_kind =
          direction == "forward" ? MapDirection::Forward : MapDirection::Inverse;
      std::ostringstream distortion;
      distortion << "depth,m,K_emp,max_stretch,min_stretch,seed\n";
      GridMap last;
      for (int dd = 1; dd <= d; ++dd) {
        const GridMap map = kr_map(spec, dd, probe_res, dir_kind);
        const BilipschitzReport rep = empirical_bilipschitz(map, pair_budget, opt.seed);
        distortion << dd << ',' << probe_res << ',' << rep.K_emp << ',' << rep.max_stretch << ','
                   << rep.min_stretch << ',' << opt.seed << '\n';
        if (dd == d) last = map;
      }
      write_text_file((dir / "distortion.csv").string(), distortion.str());
      if (dump_map) write_text_file((dir / "gridmap.csv").string(), gridmap_csv(last));

      Json meta;
      meta["seed"] = opt.seed;
      meta["direction"] = direction;
      meta["warnings"] = last.warnings;
      if (dir_kind == MapDirection::Forward) {
        const MassAudit audit = pushforward_audit(last, spec, d);
        meta["pushforward"] = {{"mean_cell_error", audit.mean_cell_error},
                               {"max_cell_error", audit.max_cell_error},
                               {"total_quad_area", audit.total_quad_area},
                               {"negative_cells", audit.negative_cells}};
      }

      if (params.depth >= 2 && dir_kind == MapDirection::Forward) {
        double K = probe_K;
        if (K <= 0) {
          // measured edge stretch: max block displacement over the covered edge
          const long n = params.branching_at(2);
          double best = 0;
          for (long k = 0; k < n; ++k) {
            const Vec2d a = last.map_point(static_cast<double>(k) / n, 0.0);
            const Vec2d b = last.map_point(static_cast<double>(k + 1) / n, 0.0);
            best = std::max(best, std::hypot(b.x - a.x, b.y - a.y) * n);
          }
          K = best;
        }
        double alpha = probe_alpha;
        if (alpha <= 0) alpha = std::max(1e-9, (1 - 14 * to_double(params.delta)) / 56);
        const ReplayDiagnostics diag = proof_replay(last, spec, K, alpha);
        write_text_file((dir / "replay.csv").string(), replay_table_csv(diag));
        meta["replay"] = replay_json(diag);
      }
      write_text_file((dir / "probe.json").string(), meta.dump(2) + "\n");
      std::cout << distortion.str();
      return kExitOk;
    }

    if (cmd_net->parsed()) {
      const Net net = generate_net(spec, d, net_scale);
      write_text_file((dir / "net.csv").string(), points_csv(net.points));
      Json j = net_json(net);
      if (match_lattice) {
        // uniform reference net at the same scale, then trim to equal size
        const DensitySpec flat{params, LevelValues{{Rat(1)}, {Rat(1)}}};
        Net uniform = generate_net(flat, 1, net_scale);
        std::vector<Vec2d> a = net.points, b = uniform.points;
        const size_t n = std::min(a.size(), b.size());
        a.resize(n);
        b.resize(n);
        const MatchResult match = match_distortion(a, b, static_cast<size_t>(max_points));
        j["match"] = {{"bilipschitz", match.bilipschitz},
                      {"points", match.matched},
                      {"total_squared_cost", match.total_squared_cost}};
      }
      write_text_file((dir / "net.json").string(), j.dump(2) + "\n");
      std::cout << j.dump(2) << '\n';
      return kExitOk;
    }
  } catch (const std::exception& e) {
    Json err;
    err["error"] = e.what();
    err["code"] = kExitConfig;
    std::cerr << err.dump() << '\n';
    return kExitConfig;
  }

  return kExitOk;
}
