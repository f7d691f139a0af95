#include "mcm/nets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mcm {

namespace {

long lcm_long(long a, long b) { return a / std::gcd(a, b) * b; }

// Smallest grid modulus that puts the level-1 core on cell boundaries, or 1
// when the denominators are unwieldy.
long alignment_modulus(const Rat& delta) {
  const Rat off = (1 - delta) / 2;
  if (!off.get_den().fits_slong_p() || !delta.get_den().fits_slong_p()) return 1;
  const long l = lcm_long(off.get_den().get_si(), delta.get_den().get_si());
  return l <= 4096 ? l : 1;
}

struct BucketGrid {
  int g = 1;
  std::vector<std::vector<int>> buckets;

  BucketGrid(const std::vector<Vec2d>& pts, int resolution) : g(std::max(1, resolution)) {
    buckets.assign(static_cast<size_t>(g) * g, {});
    for (size_t idx = 0; idx < pts.size(); ++idx) {
      const int bx = cell_of(pts[idx].x), by = cell_of(pts[idx].y);
      buckets[static_cast<size_t>(by) * g + bx].push_back(static_cast<int>(idx));
    }
  }

  int cell_of(double t) const {
    int c = static_cast<int>(std::floor(t * g));
    return std::min(std::max(c, 0), g - 1);
  }

  // Nearest point to p, optionally ignoring index `self`.
  double nearest(const std::vector<Vec2d>& pts, const Vec2d& p, int self = -1) const {
    const int bx = cell_of(p.x), by = cell_of(p.y);
    double best = std::numeric_limits<double>::infinity();
    for (int ring = 0; ring < 2 * g; ++ring) {
      // done once every candidate in the remaining rings is farther than best
      if (best < static_cast<double>(ring - 1) / g) break;
      bool any_cell = false;
      for (int dy = -ring; dy <= ring; ++dy) {
        for (int dx = -ring; dx <= ring; ++dx) {
          if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
          const int cx = bx + dx, cy = by + dy;
          if (cx < 0 || cy < 0 || cx >= g || cy >= g) continue;
          any_cell = true;
          for (int idx : buckets[static_cast<size_t>(cy) * g + cx]) {
            if (idx == self) continue;
            best = std::min(best, std::hypot(pts[static_cast<size_t>(idx)].x - p.x,
                                             pts[static_cast<size_t>(idx)].y - p.y));
          }
        }
      }
      if (!any_cell && ring > 0 && best < std::numeric_limits<double>::infinity()) break;
    }
    return best;
  }
};

// Shortest-augmenting-path assignment with potentials; O(n^3).
std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<size_t>(n) + 1, 0), v(static_cast<size_t>(n) + 1, 0);
  std::vector<int> p(static_cast<size_t>(n) + 1, 0), way(static_cast<size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<size_t>(n) + 1, 0);
    do {
      used[static_cast<size_t>(j0)] = 1;
      const int i0 = p[static_cast<size_t>(j0)];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<size_t>(j)]) continue;
        const double cur = cost[static_cast<size_t>(i0) - 1][static_cast<size_t>(j) - 1] -
                           u[static_cast<size_t>(i0)] - v[static_cast<size_t>(j)];
        if (cur < minv[static_cast<size_t>(j)]) {
          minv[static_cast<size_t>(j)] = cur;
          way[static_cast<size_t>(j)] = j0;
        }
        if (minv[static_cast<size_t>(j)] < delta) {
          delta = minv[static_cast<size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<size_t>(j)]) {
          u[static_cast<size_t>(p[static_cast<size_t>(j)])] += delta;
          v[static_cast<size_t>(j)] -= delta;
        } else {
          minv[static_cast<size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<size_t>(j0)];
      p[static_cast<size_t>(j0)] = p[static_cast<size_t>(j1)];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(static_cast<size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    if (p[static_cast<size_t>(j)] > 0) row_to_col[static_cast<size_t>(p[static_cast<size_t>(j)]) - 1] = j - 1;
  return row_to_col;
}

std::vector<Vec2d> subsample(const std::vector<Vec2d>& pts, size_t max_points) {
  if (pts.size() <= max_points) return pts;
  const size_t stride = (pts.size() + max_points - 1) / max_points;
  std::vector<Vec2d> out;
  for (size_t i = 0; i < pts.size(); i += stride) out.push_back(pts[i]);
  return out;
}

}  // namespace

Net generate_net(const DensitySpec& spec, int depth, long k) {
  if (k < 8) throw std::invalid_argument("generate_net: invalid scale, k must be >= 8");
  if (depth < 1 || depth > spec.params.depth) throw std::domain_error("generate_net: depth out of range");

  Rat t_max = spec.values.t_at(1);
  for (int j = 2; j <= depth; ++j) t_max = std::max(t_max, spec.values.t_at(j));

  // Smallest m with t_max * k^2 <= m^2; every cell mass then satisfies
  // mass * k^2 <= 1.
  long m = static_cast<long>(std::ceil(static_cast<double>(k) * std::sqrt(to_double(t_max))));
  while (Rat(m) * Rat(m) < Rat(k) * Rat(k) * t_max) ++m;
  const long align = alignment_modulus(spec.params.delta);
  if (m % align != 0) m += align - m % align;
  if (m > 20000)
    throw std::invalid_argument("generate_net: invalid scale, k with this density needs a " +
                                std::to_string(m) + "-cell grid per axis");

  Net net;
  net.grid_m = m;
  const Rat cell = Rat(1) / m;
  const Rat scale = Rat(k) * Rat(k);
  Rat acc(0);
  for (long j = 0; j < m; ++j) {
    for (long step = 0; step < m; ++step) {
      const long i = (j % 2 == 0) ? step : m - 1 - step;  // serpentine
      RectR r{cell * i, cell * j, cell * (i + 1), cell * (j + 1)};
      acc += integrate(spec, r, depth) * scale;
      if (acc >= 1) {
        acc -= 1;
        net.points.push_back(Vec2d{to_double(cell * (2 * i + 1) / 2), to_double(cell * (2 * j + 1) / 2)});
      }
    }
  }

  const NetStats stats = net_stats(net.points, static_cast<int>(std::min<long>(4 * m, 4096)));
  net.separation = stats.r;
  net.covering = stats.R;
  return net;
}

NetStats net_stats(const std::vector<Vec2d>& points, int probe_resolution) {
  if (points.size() < 2) throw std::invalid_argument("net_stats: need >= 2 points");
  NetStats stats;
  const int g = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(points.size())))));
  BucketGrid grid(points, g);

  stats.r = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < points.size(); ++i)
    stats.r = std::min(stats.r, grid.nearest(points, points[i], static_cast<int>(i)));

  const int probe = probe_resolution > 0 ? probe_resolution : 4 * g;
  stats.R = 0;
  for (int j = 0; j < probe; ++j)
    for (int i = 0; i < probe; ++i) {
      const Vec2d p{(i + 0.5) / probe, (j + 0.5) / probe};
      stats.R = std::max(stats.R, grid.nearest(points, p));
    }
  return stats;
}

MatchResult match_distortion(const std::vector<Vec2d>& a, const std::vector<Vec2d>& b,
                             size_t max_points) {
  const std::vector<Vec2d> pa = subsample(a, max_points);
  const std::vector<Vec2d> pb = subsample(b, max_points);
  if (pa.size() != pb.size())
    throw std::invalid_argument("match_distortion: nets must have equal size after subsampling");
  if (pa.empty()) throw std::invalid_argument("match_distortion: empty nets");
  const size_t n = pa.size();

  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      const double dx = pa[i].x - pb[j].x;
      const double dy = pa[i].y - pb[j].y;
      cost[i][j] = dx * dx + dy * dy;
    }

  MatchResult res;
  res.assignment = solve_assignment(cost);
  res.matched = n;
  for (size_t i = 0; i < n; ++i)
    res.total_squared_cost += cost[i][static_cast<size_t>(res.assignment[i])];

  res.bilipschitz = 1;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double dd = std::hypot(pa[i].x - pa[j].x, pa[i].y - pa[j].y);
      if (dd == 0) continue;
      const double di = std::hypot(pb[static_cast<size_t>(res.assignment[i])].x - pb[static_cast<size_t>(res.assignment[j])].x,
                                   pb[static_cast<size_t>(res.assignment[i])].y - pb[static_cast<size_t>(res.assignment[j])].y);
      if (di == 0) {
        res.bilipschitz = std::numeric_limits<double>::infinity();
        continue;
      }
      const double ratio = di / dd;
      res.bilipschitz = std::max({res.bilipschitz, ratio, 1.0 / ratio});
    }
  }
  return res;
}

}  // namespace mcm
