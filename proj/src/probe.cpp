#include "mcm/probe.hpp"

#include "mcm/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mcm {

namespace {

int clamp_cell(double t, int m) {
  int k = static_cast<int>(std::floor(t));
  if (k < 0) k = 0;
  if (k > m - 1) k = m - 1;
  return k;
}

// Piecewise-linear CDF inversion: returns the coordinate in [0,1] whose
// prefix value is u. `prefix` is nondecreasing with prefix[0] = 0.
double invert_prefix(const std::vector<double>& prefix, double u) {
  const int m = static_cast<int>(prefix.size()) - 1;
  const auto it = std::upper_bound(prefix.begin(), prefix.end(), u);
  int k = static_cast<int>(it - prefix.begin()) - 1;
  if (k < 0) k = 0;
  if (k > m - 1) k = m - 1;
  const double span = prefix[static_cast<size_t>(k) + 1] - prefix[static_cast<size_t>(k)];
  const double f = span > 0 ? (u - prefix[static_cast<size_t>(k)]) / span : 0.0;
  return (static_cast<double>(k) + std::min(std::max(f, 0.0), 1.0)) / m;
}

double quad_signed_area(const Vec2d& a, const Vec2d& b, const Vec2d& c, const Vec2d& d) {
  // Shoelace over a-b-c-d.
  return 0.5 * ((a.x * b.y - b.x * a.y) + (b.x * c.y - c.x * b.y) +
                (c.x * d.y - d.x * c.y) + (d.x * a.y - a.x * d.y));
}

double dist(const Vec2d& a, const Vec2d& b) { return std::hypot(a.x - b.x, a.y - b.y); }

}  // namespace

Vec2d GridMap::map_point(double x, double y) const {
  if (model) {
    const KrModel& mo = *model;
    if (mo.direction == MapDirection::Forward) {
      const int i = clamp_cell(x * m, m);
      const int j = clamp_cell(y * m, m);
      const double fx = x * m - i;
      const double fy = y * m - j;
      const auto& G = mo.G[static_cast<size_t>(i)];
      return Vec2d{mo.F[static_cast<size_t>(i)] + (mo.F[static_cast<size_t>(i) + 1] - mo.F[static_cast<size_t>(i)]) * fx,
                   G[static_cast<size_t>(j)] + (G[static_cast<size_t>(j) + 1] - G[static_cast<size_t>(j)]) * fy};
    }
    const double px = invert_prefix(mo.F, x);
    const int strip = clamp_cell(px * m, m);
    return Vec2d{px, invert_prefix(mo.G[static_cast<size_t>(strip)], y)};
  }
  // Bilinear interpolation of the vertex lattice.
  const int i = clamp_cell(x * m, m);
  const int j = clamp_cell(y * m, m);
  const double fx = x * m - i;
  const double fy = y * m - j;
  const Vec2d& p00 = at(i, j);
  const Vec2d& p10 = at(i + 1, j);
  const Vec2d& p01 = at(i, j + 1);
  const Vec2d& p11 = at(i + 1, j + 1);
  auto lerp2 = [&](double a00, double a10, double a01, double a11) {
    return (1 - fx) * (1 - fy) * a00 + fx * (1 - fy) * a10 + (1 - fx) * fy * a01 + fx * fy * a11;
  };
  return Vec2d{lerp2(p00.x, p10.x, p01.x, p11.x), lerp2(p00.y, p10.y, p01.y, p11.y)};
}

GridMap GridMap::from_function(int m, const std::function<Vec2d(double, double)>& f) {
  if (m < 1) throw std::invalid_argument("GridMap::from_function: m must be >= 1");
  GridMap g;
  g.m = m;
  g.vertices.resize(static_cast<size_t>(m + 1) * (m + 1));
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i <= m; ++i)
      g.at(i, j) = f(static_cast<double>(i) / m, static_cast<double>(j) / m);
  return g;
}

GridMap kr_map(const DensitySpec& spec, int depth, int m, MapDirection direction) {
  if (depth < 1 || depth > spec.params.depth) throw std::domain_error("kr_map: depth out of range");
  GridMap g = kr_map_from_masses(
      m, [&](const RectR& r) { return integrate(spec, r, depth); }, direction);

  // Coarse grids cannot resolve the deepest covering squares; degrade
  // gracefully and say so.
  long coarse = 1;
  for (int j = 2; j <= depth; ++j) coarse *= spec.params.branching_at(j);
  if (m < coarse) {
    std::ostringstream os;
    os << "resolution m=" << m << " does not resolve level-" << depth
       << " covering squares (1/" << coarse << ")";
    g.warnings.push_back(os.str());
  }
  return g;
}

GridMap kr_map_from_masses(int m, const CellMassFn& mass_fn, MapDirection direction) {
  if (m < 8) throw std::invalid_argument("kr_map: m must be >= 8");

  GridMap g;
  g.m = m;

  // Exact cell masses and prefix sums; doubles only at the end.
  const Rat cell = Rat(1) / m;
  std::vector<std::vector<Rat>> mass(static_cast<size_t>(m));
  std::vector<Rat> col(static_cast<size_t>(m), Rat(0));
  for (int i = 0; i < m; ++i) {
    auto& column = mass[static_cast<size_t>(i)];
    column.reserve(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
      RectR r{cell * i, cell * j, cell * (i + 1), cell * (j + 1)};
      column.push_back(mass_fn(r));
      if (column.back() < 0) throw std::domain_error("kr_map: negative cell mass");
      col[static_cast<size_t>(i)] += column.back();
    }
  }
  Rat total(0);
  for (const Rat& c : col) total += c;
  if (total <= 0) throw std::domain_error("kr_map: density has no mass");

  KrModel model;
  model.m = m;
  model.direction = direction;
  model.F.resize(static_cast<size_t>(m) + 1);
  model.G.assign(static_cast<size_t>(m), {});
  model.cell_mass.assign(static_cast<size_t>(m), {});
  std::vector<Rat> col_prefix(static_cast<size_t>(m) + 1, Rat(0));
  for (int i = 0; i < m; ++i)
    col_prefix[static_cast<size_t>(i) + 1] = col_prefix[static_cast<size_t>(i)] + col[static_cast<size_t>(i)];
  for (int i = 0; i <= m; ++i)
    model.F[static_cast<size_t>(i)] = to_double(col_prefix[static_cast<size_t>(i)] / total);
  model.F.front() = 0;
  model.F.back() = 1;

  std::vector<std::vector<Rat>> g_prefix(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    auto& gp = g_prefix[static_cast<size_t>(i)];
    gp.assign(static_cast<size_t>(m) + 1, Rat(0));
    for (int j = 0; j < m; ++j)
      gp[static_cast<size_t>(j) + 1] = gp[static_cast<size_t>(j)] + mass[static_cast<size_t>(i)][static_cast<size_t>(j)];
    auto& G = model.G[static_cast<size_t>(i)];
    G.resize(static_cast<size_t>(m) + 1);
    const bool empty_col = col[static_cast<size_t>(i)] == 0;
    for (int j = 0; j <= m; ++j)
      G[static_cast<size_t>(j)] =
          empty_col ? static_cast<double>(j) / m
                    : to_double(gp[static_cast<size_t>(j)] / col[static_cast<size_t>(i)]);
    G.front() = 0;
    G.back() = 1;
    auto& cm = model.cell_mass[static_cast<size_t>(i)];
    cm.reserve(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j)
      cm.push_back(to_double(mass[static_cast<size_t>(i)][static_cast<size_t>(j)]));
  }

  g.vertices.resize(static_cast<size_t>(m + 1) * (m + 1));
  if (direction == MapDirection::Forward) {
    for (int i = 0; i <= m; ++i) {
      const double x_img = model.F[static_cast<size_t>(i)];
      const size_t lo = static_cast<size_t>(i == 0 ? 0 : i - 1);
      const size_t hi = static_cast<size_t>(i == m ? m - 1 : i);
      const Rat window = col[lo] + (hi != lo ? col[hi] : Rat(0));
      for (int j = 0; j <= m; ++j) {
        double y_img;
        if (window == 0) {
          y_img = static_cast<double>(j) / m;
        } else {
          // Conditional of the adjacent strip window (its union measure).
          Rat num = g_prefix[lo][static_cast<size_t>(j)];
          if (hi != lo) num += g_prefix[hi][static_cast<size_t>(j)];
          y_img = to_double(num / window);
        }
        g.at(i, j) = Vec2d{x_img, y_img};
      }
    }
  } else {
    for (int j = 0; j <= m; ++j) {
      const double v = static_cast<double>(j) / m;
      for (int i = 0; i <= m; ++i) {
        const double u = static_cast<double>(i) / m;
        const double x = invert_prefix(model.F, u);
        const int strip = clamp_cell(x * m, m);
        g.at(i, j) = Vec2d{x, invert_prefix(model.G[static_cast<size_t>(strip)], v)};
      }
    }
  }
  g.model = std::move(model);
  return g;
}

double model_image_area(const GridMap& map, double x0, double y0, double x1, double y1) {
  if (!map.model || map.model->direction != MapDirection::Forward)
    throw std::invalid_argument("model_image_area: forward strip model required");
  const KrModel& mo = *map.model;
  const int m = mo.m;
  x0 = std::max(x0, 0.0);
  y0 = std::max(y0, 0.0);
  x1 = std::min(x1, 1.0);
  y1 = std::min(y1, 1.0);
  if (x1 <= x0 || y1 <= y0) return 0;
  double area = 0;
  const int i0 = clamp_cell(x0 * m, m), i1 = clamp_cell(std::nextafter(x1 * m, 0.0), m);
  const int j0 = clamp_cell(y0 * m, m), j1 = clamp_cell(std::nextafter(y1 * m, 0.0), m);
  for (int i = i0; i <= i1; ++i) {
    const double sx0 = std::max(x0, static_cast<double>(i) / m);
    const double sx1 = std::min(x1, static_cast<double>(i + 1) / m);
    if (sx1 <= sx0) continue;
    const double fx = (sx1 - sx0) * m;
    const double strip_width = mo.F[static_cast<size_t>(i) + 1] - mo.F[static_cast<size_t>(i)];
    const auto& G = mo.G[static_cast<size_t>(i)];
    double conditional = 0;
    for (int j = j0; j <= j1; ++j) {
      const double sy0 = std::max(y0, static_cast<double>(j) / m);
      const double sy1 = std::min(y1, static_cast<double>(j + 1) / m);
      if (sy1 <= sy0) continue;
      const double fy = (sy1 - sy0) * m;
      conditional += fy * (G[static_cast<size_t>(j) + 1] - G[static_cast<size_t>(j)]);
    }
    area += fx * strip_width * conditional;
  }
  return area;
}

MassAudit pushforward_audit(const GridMap& map, const DensitySpec& spec, int depth) {
  MassAudit audit;
  const int m = map.m;
  const Rat cell = Rat(1) / m;
  double total_err = 0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double quad = quad_signed_area(map.at(i, j), map.at(i + 1, j),
                                           map.at(i + 1, j + 1), map.at(i, j + 1));
      double exact;
      if (map.model && map.model->direction == MapDirection::Forward) {
        exact = map.model->cell_mass[static_cast<size_t>(i)][static_cast<size_t>(j)];
      } else {
        RectR r{cell * i, cell * j, cell * (i + 1), cell * (j + 1)};
        exact = to_double(integrate(spec, r, depth));
      }
      const double err = std::fabs(quad - exact);
      total_err += err;
      audit.max_cell_error = std::max(audit.max_cell_error, err);
      audit.total_quad_area += quad;
      if (!(quad > 0)) audit.negative_cells += 1;
    }
  }
  audit.mean_cell_error = total_err / (static_cast<double>(m) * m);
  return audit;
}

BilipschitzReport empirical_bilipschitz(const GridMap& map, long pair_budget, unsigned long seed) {
  BilipschitzReport rep;
  rep.seed = seed;
  rep.max_stretch = 0;
  rep.min_stretch = std::numeric_limits<double>::infinity();
  const int m = map.m;

  auto consider = [&](int i0, int j0, int i1, int j1) {
    const Vec2d a{static_cast<double>(i0) / m, static_cast<double>(j0) / m};
    const Vec2d b{static_cast<double>(i1) / m, static_cast<double>(j1) / m};
    const double dd = dist(a, b);
    if (dd == 0) return;
    const double di = dist(map.at(i0, j0), map.at(i1, j1));
    const double ratio = di / dd;
    if (ratio > rep.max_stretch) {
      rep.max_stretch = ratio;
      rep.max_pair = StretchPair{a, b, ratio};
    }
    if (ratio < rep.min_stretch) {
      rep.min_stretch = ratio;
      rep.min_pair = StretchPair{a, b, ratio};
    }
  };

  for (int j = 0; j <= m; ++j)
    for (int i = 0; i <= m; ++i) {
      if (i < m) consider(i, j, i + 1, j);
      if (j < m) consider(i, j, i, j + 1);
    }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, m);
  for (long k = 0; k < pair_budget; ++k) {
    const int i0 = pick(rng), j0 = pick(rng), i1 = pick(rng), j1 = pick(rng);
    if (i0 == i1 && j0 == j1) continue;
    rep.random_pairs += 1;
    consider(i0, j0, i1, j1);
  }

  rep.injective_at_lattice = rep.min_stretch > 0;
  rep.K_emp = rep.max_stretch;
  if (rep.min_stretch > 0)
    rep.K_emp = std::max(rep.K_emp, 1.0 / rep.min_stretch);
  else
    rep.K_emp = std::numeric_limits<double>::infinity();
  return rep;
}

double vertical_cuts(const GridMap& map, const LatticeRegion& region, double x) {
  double total = 0;
  std::vector<double> ys;
  for (int i = region.i0; i < region.i1; ++i) {
    for (int j = region.j0; j < region.j1; ++j) {
      const Vec2d quad[4] = {map.at(i, j), map.at(i + 1, j), map.at(i + 1, j + 1), map.at(i, j + 1)};
      ys.clear();
      for (int e = 0; e < 4; ++e) {
        const Vec2d& p = quad[e];
        const Vec2d& q = quad[(e + 1) % 4];
        // Half-open crossing rule so shared vertices count once.
        const bool crosses = (p.x <= x && q.x > x) || (q.x <= x && p.x > x);
        if (!crosses) continue;
        const double t = (x - p.x) / (q.x - p.x);
        ys.push_back(p.y + t * (q.y - p.y));
      }
      if (ys.size() < 2) continue;
      std::sort(ys.begin(), ys.end());
      for (size_t k = 0; k + 1 < ys.size(); k += 2) total += ys[k + 1] - ys[k];
    }
  }
  return total;
}

namespace {

// 1-d closed intervals with subtraction, for the V_i / C_i bookkeeping.
struct Interval {
  double lo = 0, hi = 0;
  bool empty() const { return hi <= lo; }
  double length() const { return empty() ? 0 : hi - lo; }
};

std::vector<Interval> subtract(const Interval& base, std::vector<Interval> holes) {
  std::sort(holes.begin(), holes.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  double cursor = base.lo;
  for (const Interval& h : holes) {
    if (h.hi <= cursor) continue;
    if (h.lo >= base.hi) break;
    if (h.lo > cursor) out.push_back({cursor, std::min(h.lo, base.hi)});
    cursor = std::max(cursor, h.hi);
    if (cursor >= base.hi) break;
  }
  if (cursor < base.hi) out.push_back({cursor, base.hi});
  return out;
}

Interval x_extent(const std::vector<Vec2d>& pts) {
  Interval iv{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Vec2d& p : pts) {
    iv.lo = std::min(iv.lo, p.x);
    iv.hi = std::max(iv.hi, p.x);
  }
  return iv;
}

// First intersection of the polyline with the vertical line at x, or nan.
double polyline_crossing_y(const PolylineD& poly, double x) {
  for (size_t k = 0; k + 1 < poly.vertices.size(); ++k) {
    const Vec2d& p = poly.vertices[k];
    const Vec2d& q = poly.vertices[k + 1];
    const bool crosses = (p.x <= x && q.x >= x) || (q.x <= x && p.x >= x);
    if (!crosses || p.x == q.x) continue;
    const double t = (x - p.x) / (q.x - p.x);
    return p.y + t * (q.y - p.y);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

ReplayDiagnostics proof_replay(const GridMap& map, const DensitySpec& spec, double K, double alpha) {
  if (spec.params.depth < 2)
    throw std::invalid_argument("proof_replay: construction depth >= 2 required (covered edge)");
  ReplayDiagnostics d;
  const long n = spec.params.branching_at(2);
  d.N = n;
  d.h = 1.0 / static_cast<double>(n);
  d.b = 1.0;
  d.K = K;
  d.alpha = alpha;
  const double delta = to_double(spec.params.delta);
  const int m = map.m;

  EdgeMapSample sample;
  sample.N = d.N;
  sample.h = d.h;
  sample.K = K;
  sample.alpha = alpha;
  for (long k = 0; k <= d.N; ++k) {
    const double x = static_cast<double>(k) * d.h;
    sample.bottom.push_back(map.map_point(x, 0.0));
    sample.top.push_back(map.map_point(x, d.h));
  }
  d.nice = nice_rectangles(sample);

  // Dense boundary polylines of the covered band: bottom edge and the rest.
  const int dense = 8;
  PolylineD bottom_img, top_img;
  for (long k = 0; k <= d.N * dense; ++k) {
    const double x = static_cast<double>(k) / static_cast<double>(d.N * dense);
    bottom_img.vertices.push_back(map.map_point(x, 0.0));
    top_img.vertices.push_back(map.map_point(x, d.h));
  }
  // P: left side bottom-to-top, across the top edge, right side top-to-bottom.
  PolylineD upper;
  for (int k = 0; k <= dense; ++k)
    upper.vertices.push_back(map.map_point(0.0, d.h * k / dense));
  for (size_t k = 1; k < top_img.vertices.size(); ++k)
    upper.vertices.push_back(top_img.vertices[k]);
  for (int k = dense - 1; k >= 0; --k)
    upper.vertices.push_back(map.map_point(1.0, d.h * k / dense));

  d.vl_bottom = lengths(bottom_img).vertical;
  const CurveLengths top_len = lengths(upper);
  d.length_top = top_len.length;
  d.vl_top = top_len.vertical;

  const int band_j1 = std::max(1, static_cast<int>(std::ceil(d.h * m)));

  const long blocks = d.N / 7;
  for (long i = 1; i <= blocks; ++i) {
    ReplayBlockRow row;
    row.i = i;
    const double ax = static_cast<double>(7 * (i - 1)) * d.h;
    // cuts are measured through this block only, not the entire band
    const LatticeRegion block_region{
        std::max(0, static_cast<int>(std::floor(ax * m))), 0,
        std::min(m, static_cast<int>(std::ceil((ax + 7 * d.h) * m))), band_j1};
    const Vec2d& pa = sample.bottom[static_cast<size_t>(7 * (i - 1))];
    const Vec2d& pb = sample.bottom[static_cast<size_t>(7 * i)];
    row.endpoint_dx = std::fabs(pa.x - pb.x);
    row.nice = std::find(d.nice.nice_indices.begin(), d.nice.nice_indices.end(), i) !=
               d.nice.nice_indices.end();

    // Middle square S_{7i-3} spans [ax+3h, ax+4h] x [0, h].
    const double mx0 = ax + 3 * d.h, mx1 = ax + 4 * d.h;
    std::vector<Vec2d> mid_pts;
    const int g = 6;
    for (int u = 0; u <= g; ++u)
      for (int v = 0; v <= g; ++v)
        mid_pts.push_back(map.map_point(mx0 + (mx1 - mx0) * u / g, d.h * v / g));
    PolylineD left_img, right_img;
    for (int v = 0; v <= g; ++v) {
      left_img.vertices.push_back(map.map_point(ax, d.h * v / g));
      right_img.vertices.push_back(map.map_point(ax + 7 * d.h, d.h * v / g));
    }
    if (row.nice) {
      const DisjointnessReport dis = projection_disjointness(sample, mid_pts, left_img, right_img, i);
      row.disjoint_ok = dis.disjoint_left && dis.disjoint_right;
    }

    // V_i: x-projection of the image of the core square of S_{7i-3}.
    const double t0 = mx0 + (1 - delta) * d.h / 2;
    const double ts = delta * d.h;
    std::vector<Vec2d> core_pts;
    for (int u = 0; u <= 4; ++u)
      for (int v = 0; v <= 4; ++v)
        core_pts.push_back(map.map_point(t0 + ts * u / 4, (1 - delta) * d.h / 2 + ts * v / 4));
    Interval V = x_extent(core_pts);
    row.v_len = V.length();

    // C_i: mid-square projection minus the projections of the block's cores.
    Interval mid = x_extent(mid_pts);
    std::vector<Interval> holes;
    for (int s = 0; s < 7; ++s) {
      const double cx0 = ax + s * d.h + (1 - delta) * d.h / 2;
      std::vector<Vec2d> pts;
      for (int u = 0; u <= 4; ++u)
        for (int v = 0; v <= 4; ++v)
          pts.push_back(map.map_point(cx0 + ts * u / 4, (1 - delta) * d.h / 2 + ts * v / 4));
      holes.push_back(x_extent(pts));
    }
    std::vector<Interval> C = subtract(mid, holes);
    row.c_len = 0;
    for (const Interval& c : C) row.c_len += c.length();

    // Vertical-cut averages and the witness cuts.
    const int cut_samples = 5;
    double best_x = V.lo, best_f = -1;
    if (!V.empty()) {
      double acc = 0;
      for (int s = 0; s < cut_samples; ++s) {
        const double x = V.lo + V.length() * (s + 0.5) / cut_samples;
        const double f = vertical_cuts(map, block_region, x);
        acc += f;
        if (f > best_f) {
          best_f = f;
          best_x = x;
        }
      }
      row.hV = acc / cut_samples;
    }
    double worst_x = 0, worst_f = std::numeric_limits<double>::infinity();
    double c_acc = 0;
    long c_cnt = 0;
    for (const Interval& c : C) {
      if (c.empty()) continue;
      for (int s = 0; s < cut_samples; ++s) {
        const double x = c.lo + c.length() * (s + 0.5) / cut_samples;
        const double f = vertical_cuts(map, block_region, x);
        c_acc += f;
        c_cnt += 1;
        if (f < worst_f) {
          worst_f = f;
          worst_x = x;
        }
      }
    }
    if (c_cnt > 0) row.hC = c_acc / static_cast<double>(c_cnt);

    if (best_f >= 0 && c_cnt > 0) {
      const double u = polyline_crossing_y(bottom_img, best_x);
      const double u2 = polyline_crossing_y(top_img, best_x);
      const double l = polyline_crossing_y(bottom_img, worst_x);
      const double l2 = polyline_crossing_y(top_img, worst_x);
      if (!std::isnan(u) && !std::isnan(u2) && !std::isnan(l) && !std::isnan(l2)) {
        row.du = std::fabs(u2 - u);
        row.dl = std::fabs(l2 - l);
        if (row.nice) d.sum_pairs += std::fabs(u2 - l2) + std::fabs(u - l);
      }
    }
    d.rows.push_back(row);
  }

  bool q_ok = true;
  try {
    d.q = q_value(to_double(spec.params.delta), to_double(spec.params.gamma), alpha);
  } catch (const std::domain_error&) {
    d.q = std::numeric_limits<double>::quiet_NaN();
    q_ok = false;
  }
  d.delta_bound = q_ok ? d.q * d.h / K : std::numeric_limits<double>::quiet_NaN();
  const double root = std::sqrt(std::max(0.0, alpha * (2 - alpha)));
  d.omega = q_ok ? d.delta_bound * static_cast<double>(d.N) / 14 - K * d.b * root
                 : std::numeric_limits<double>::quiet_NaN();
  d.length_lower_bound = q_ok ? std::sqrt(std::max(0.0, d.omega) * std::max(0.0, d.omega) +
                                          K * d.b * (1 - alpha) * K * d.b * (1 - alpha))
                              : std::numeric_limits<double>::quiet_NaN();
  d.length_upper_bound = K * static_cast<double>(d.N + 2) * d.h;
  d.premises_ok = d.nice.premise_endpoint && d.nice.premise_stretch && q_ok;

  // Theorem-3 audit over the replayed band.
  const Rat band_mass = integrate(spec, RectR{Rat(0), Rat(0), Rat(1), Rat(1) / n}, spec.params.depth);
  if (map.model && map.model->direction == MapDirection::Forward) {
    const double img = model_image_area(map, 0, 0, 1, d.h);
    d.band_mass_rel_error = std::fabs(img - to_double(band_mass)) / to_double(band_mass);
  } else {
    double img = 0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < band_j1; ++j)
        img += quad_signed_area(map.at(i, j), map.at(i + 1, j), map.at(i + 1, j + 1), map.at(i, j + 1));
    d.band_mass_rel_error = std::fabs(img - to_double(band_mass)) / to_double(band_mass);
  }
  return d;
}

}  // namespace mcm
