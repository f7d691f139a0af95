#include "mcm/hierarchy.hpp"

#include <sstream>
#include <stdexcept>

namespace mcm {

namespace {

std::string level_prefix(int level) {
  std::ostringstream os;
  os << "level " << level << ": ";
  return os.str();
}

}  // namespace

ValidationReport validate_params(const ConstructionParams& params) {
  ValidationReport rep;
  rep.ok = true;
  auto add = [&rep](const std::string& rule, bool pass, int level, const std::string& detail) {
    rep.items.push_back({rule, pass, level, detail});
    rep.ok = rep.ok && pass;
  };

  add("delta-range", params.delta > 0 && params.delta < 1, 0,
      "delta must lie in (0,1), got " + fraction_string(params.delta));
  add("gamma-range", params.gamma > 0 && params.gamma < 1, 0,
      "gamma must lie in (0,1), got " + fraction_string(params.gamma));
  add("depth-consistency",
      params.depth >= 1 && params.branching.size() == static_cast<size_t>(params.depth - 1), 0,
      "branching list must hold exactly depth-1 counts");

  // Needed for s_j < 1 < t_j at every level.
  add("value-ordering", params.gamma + params.delta * params.delta < 1, 0,
      "gamma + delta^2 must be < 1");

  if (params.branching.size() == static_cast<size_t>(params.depth - 1)) {
    for (int j = 2; j <= params.depth; ++j) {
      const long n = params.branching_at(j);
      add("branching-multiple-of-7", n % 7 == 0, j,
          level_prefix(j) + "n must be divisible by 7, got " + std::to_string(n));
      // Ring band of width s/n must fit strictly between the boundary of S'
      // and T': n > 2/(1-delta).
      const bool band_fits = n > 0 && Rat(n) * (1 - params.delta) > 2;
      add("ring-band-fits", band_fits, j,
          level_prefix(j) + "n must exceed 2/(1-delta)");
      // s_j > 0 requires gamma > (4n-4)/n^2.
      const Rat ring_frac = n > 0 ? Rat(4 * n - 4) / (Rat(n) * Rat(n)) : Rat(1);
      add("annulus-positivity", n > 0 && params.gamma > ring_frac, j,
          level_prefix(j) + "gamma must exceed (4n-4)/n^2 = " + fraction_string(ring_frac));
    }
  }

  if (params.strict_proof_mode) {
    add("strict-delta", params.delta > 0 && params.delta * 14 < 1, 0,
        "strict mode requires delta in (0, 1/14)");
    add("strict-gamma", params.gamma > 0 && params.gamma < 1 - 14 * params.delta, 0,
        "strict mode requires gamma in (0, 1 - 14*delta)");
  }

  return rep;
}

long ring_count(long n) { return 4 * n - 4; }

Square ring_square(const Square& parent, long n, long index) {
  if (n < 3) throw std::invalid_argument("ring_square: n must be >= 3");
  if (index < 0 || index >= ring_count(n)) throw std::invalid_argument("ring_square: index out of range");
  const Rat w = parent.side / n;
  long kx = 0, ky = 0;
  if (index <= n - 1) {  // bottom edge, left to right
    kx = index;
    ky = 0;
  } else if (index <= 2 * n - 2) {  // right edge, bottom to top
    kx = n - 1;
    ky = index - (n - 1);
  } else if (index <= 3 * n - 3) {  // top edge, right to left
    kx = n - 1 - (index - (2 * n - 2));
    ky = n - 1;
  } else {  // left edge, top to bottom
    kx = 0;
    ky = n - 1 - (index - (3 * n - 3));
  }
  return Square{{parent.origin.x + w * kx, parent.origin.y + w * ky}, w};
}

long ring_index_from_cell(long n, long kx, long ky) {
  if (kx < 0 || ky < 0 || kx >= n || ky >= n) return -1;
  if (ky == 0) return kx;
  if (kx == n - 1) return (n - 1) + ky;
  if (ky == n - 1) return (2 * n - 2) + (n - 1 - kx);
  if (kx == 0) return (3 * n - 3) + (n - 1 - ky);
  return -1;
}

std::vector<Square> ring_layout(const Square& parent, long n) {
  if (n < 3) throw std::invalid_argument("ring_layout: n must be >= 3");
  std::vector<Square> out;
  out.reserve(static_cast<size_t>(ring_count(n)));
  for (long i = 0; i < ring_count(n); ++i) out.push_back(ring_square(parent, n, i));
  return out;
}

Region locate(const PointR& p, const Unit& unit, const Rat& delta, long n) {
  const Square& outer = unit.outer;
  if (!outer.contains_halfopen(p)) throw std::domain_error("locate: point outside the unit square");
  const Rat w = outer.side / n;
  {
    const long kx = rat_floor_long((p.x - outer.origin.x) / w);
    const long ky = rat_floor_long((p.y - outer.origin.y) / w);
    const long idx = ring_index_from_cell(n, kx, ky);
    if (idx >= 0) return Region{RegionKind::OuterRing, idx};
  }
  const Square core = unit.inner(delta);
  if (!core.contains_halfopen(p)) return Region{RegionKind::SAnnulus, -1};
  const Rat wi = core.side / n;
  const long kx = rat_floor_long((p.x - core.origin.x) / wi);
  const long ky = rat_floor_long((p.y - core.origin.y) / wi);
  const long idx = ring_index_from_cell(n, kx, ky);
  if (idx >= 0) return Region{RegionKind::InnerRing, idx};
  return Region{RegionKind::TCore, -1};
}

Unit child_unit(const Unit& unit, const Rat& delta, long n, RegionKind ring, long index) {
  if (ring == RegionKind::OuterRing) return Unit{ring_square(unit.outer, n, index), unit.birth + 1};
  if (ring == RegionKind::InnerRing) return Unit{ring_square(unit.inner(delta), n, index), unit.birth + 1};
  throw std::invalid_argument("child_unit: ring must be OuterRing or InnerRing");
}

std::vector<Unit> unit_children(const Unit& unit, const Rat& delta, long n) {
  if (n < 3) throw std::invalid_argument("unit_children: n must be >= 3");
  std::vector<Unit> out;
  out.reserve(static_cast<size_t>(2 * ring_count(n)));
  for (long i = 0; i < ring_count(n); ++i) out.push_back(child_unit(unit, delta, n, RegionKind::OuterRing, i));
  for (long i = 0; i < ring_count(n); ++i) out.push_back(child_unit(unit, delta, n, RegionKind::InnerRing, i));
  return out;
}

Unit UnitAddress::resolve(const ConstructionParams& params) const {
  if (path.size() > static_cast<size_t>(params.depth - 1))
    throw std::invalid_argument("UnitAddress: path longer than depth-1");
  Unit unit = root_unit();
  for (const ChildStep& step : path) {
    const long n = params.branching_at(unit.birth + 1);
    if (step.index < 0 || step.index >= ring_count(n))
      throw std::invalid_argument("UnitAddress: ring index out of range for level");
    if (step.ring != RegionKind::OuterRing && step.ring != RegionKind::InnerRing)
      throw std::invalid_argument("UnitAddress: step must name a ring");
    unit = child_unit(unit, params.delta, n, step.ring, step.index);
  }
  return unit;
}

}  // namespace mcm
