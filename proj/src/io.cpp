#include "mcm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mcm {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

}  // namespace

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string levels_csv(const DensitySpec& spec) {
  std::ostringstream os;
  os << "level,s_fraction,s_decimal,t_fraction,t_decimal\n";
  for (int j = 1; j <= spec.values.levels(); ++j) {
    os << j << ',' << fraction_string(spec.values.s_at(j)) << ',' << decimal_string(spec.values.s_at(j))
       << ',' << fraction_string(spec.values.t_at(j)) << ',' << decimal_string(spec.values.t_at(j)) << '\n';
  }
  return os.str();
}

std::string raster_csv(const std::vector<Rat>& grid, int m) {
  std::ostringstream os;
  os << "row,col,value_fraction,value\n";
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      const Rat& v = grid[static_cast<size_t>(r) * m + c];
      os << r << ',' << c << ',' << fraction_string(v) << ',' << decimal_string(v) << '\n';
    }
  return os.str();
}

std::string raster_pgm(const std::vector<Rat>& grid, int m, const Rat& min_value, const Rat& max_value) {
  std::ostringstream os;
  os << "P2\n" << m << ' ' << m << "\n65535\n";
  const Rat span = max_value - min_value;
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      long level = 0;
      if (span > 0) {
        const Rat scaled = (grid[static_cast<size_t>(r) * m + c] - min_value) * 65535 / span;
        level = rat_floor_long(scaled + Rat(1, 2));
        level = std::min(std::max(level, 0L), 65535L);
      }
      os << level << (c + 1 == m ? '\n' : ' ');
    }
  }
  return os.str();
}

Json raster_sidecar(const DensitySpec& spec, int m, int depth, const std::string& mode,
                    const Rat& min_value, const Rat& max_value) {
  Json j;
  j["format"] = "P2";
  j["maxval"] = 65535;
  j["resolution"] = m;
  j["depth"] = depth;
  j["mode"] = mode;
  j["delta"] = fraction_string(spec.params.delta);
  j["gamma"] = fraction_string(spec.params.gamma);
  j["min_value"] = {{"fraction", fraction_string(min_value)}, {"decimal", to_double(min_value)}};
  j["max_value"] = {{"fraction", fraction_string(max_value)}, {"decimal", to_double(max_value)}};
  j["mapping"] = "value -> round((value - min) / (max - min) * 65535)";
  return j;
}

std::string points_csv(const std::vector<Vec2d>& points) {
  std::ostringstream os;
  os << "x,y\n";
  for (const Vec2d& p : points) os << fmt_double(p.x) << ',' << fmt_double(p.y) << '\n';
  return os.str();
}

std::string gridmap_csv(const GridMap& map) {
  std::ostringstream os;
  os << "i,j,x,y\n";
  for (int j = 0; j <= map.m; ++j)
    for (int i = 0; i <= map.m; ++i)
      os << i << ',' << j << ',' << fmt_double(map.at(i, j).x) << ',' << fmt_double(map.at(i, j).y) << '\n';
  return os.str();
}

Json witness_json(const BoundWitness& w) {
  Json j;
  j["K"] = w.K;
  j["alpha"] = w.alpha;
  j["N0"] = w.N0;
  j["q"] = w.q;
  j["Delta_per_h"] = w.Delta_per_h;
  j["Omega"] = w.Omega;
  j["lhs"] = w.lhs;
  j["rhs"] = w.rhs;
  j["contradiction"] = w.contradiction;
  j["valid"] = w.valid;
  if (!w.note.empty()) j["note"] = w.note;
  return j;
}

Json validation_json(const ValidationReport& report) {
  Json j;
  j["ok"] = report.ok;
  j["rules"] = Json::array();
  for (const auto& item : report.items) {
    j["rules"].push_back({{"rule", item.rule},
                          {"pass", item.pass},
                          {"level", item.level},
                          {"detail", item.detail}});
  }
  return j;
}

Json constraint_json(const ConstraintReport& report) {
  Json j;
  j["ok"] = report.ok();
  j["units_checked"] = report.units_checked;
  j["units_geometric"] = report.units_geometric;
  j["violations"] = Json::array();
  for (const auto& v : report.violations)
    j["violations"].push_back({{"level", v.level}, {"what", v.what}});
  return j;
}

Json net_json(const Net& net) {
  Json j;
  j["count"] = net.points.size();
  j["grid_m"] = net.grid_m;
  j["separation"] = net.separation;
  j["covering"] = net.covering;
  j["separation_guarantee"] = 1.0 / static_cast<double>(net.grid_m);
  return j;
}

Json bilipschitz_json(const BilipschitzReport& r) {
  Json j;
  j["K_emp"] = r.K_emp;
  j["max_stretch"] = r.max_stretch;
  j["min_stretch"] = r.min_stretch;
  j["injective_at_lattice"] = r.injective_at_lattice;
  j["seed"] = r.seed;
  j["random_pairs"] = r.random_pairs;
  j["max_pair"] = {{"a", {r.max_pair.a.x, r.max_pair.a.y}}, {"b", {r.max_pair.b.x, r.max_pair.b.y}}};
  j["min_pair"] = {{"a", {r.min_pair.a.x, r.min_pair.a.y}}, {"b", {r.min_pair.b.x, r.min_pair.b.y}}};
  return j;
}

Json replay_json(const ReplayDiagnostics& d) {
  Json j;
  j["N"] = d.N;
  j["h"] = d.h;
  j["b"] = d.b;
  j["K"] = d.K;
  j["alpha"] = d.alpha;
  j["premise_endpoint"] = d.nice.premise_endpoint;
  j["premise_stretch"] = d.nice.premise_stretch;
  j["premises_ok"] = d.premises_ok;
  j["nice_count"] = d.nice.count;
  j["nice_required"] = static_cast<double>(d.N) / 14.0;
  j["q"] = d.q;
  j["Delta"] = d.delta_bound;
  j["Omega"] = d.omega;
  j["sum_pairs"] = d.sum_pairs;
  j["vl_bottom"] = d.vl_bottom;
  j["vl_top"] = d.vl_top;
  j["length_top"] = d.length_top;
  j["length_lower_bound"] = d.length_lower_bound;
  j["length_upper_bound"] = d.length_upper_bound;
  j["band_mass_rel_error"] = d.band_mass_rel_error;
  return j;
}

std::string replay_table_csv(const ReplayDiagnostics& d) {
  std::ostringstream os;
  os << "block,nice,endpoint_dx,disjoint_ok,v_len,c_len,hV,hC,du,dl\n";
  for (const auto& row : d.rows) {
    os << row.i << ',' << (row.nice ? 1 : 0) << ',' << fmt_double(row.endpoint_dx) << ','
       << (row.disjoint_ok ? 1 : 0) << ',' << fmt_double(row.v_len) << ',' << fmt_double(row.c_len)
       << ',' << fmt_double(row.hV) << ',' << fmt_double(row.hC) << ',' << fmt_double(row.du) << ','
       << fmt_double(row.dl) << '\n';
  }
  return os.str();
}

}  // namespace mcm
