#include "mcm/density.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace mcm {

namespace {

Rat ring_fraction(long n) { return Rat(4 * n - 4) / (Rat(n) * Rat(n)); }

// Cell-index range [lo, hi] of the n-subdivision cells of `parent` whose
// closed extent overlaps [a, b] with positive measure along one axis.
struct CellRange {
  long lo = 0, hi = -1;
  bool empty() const { return hi < lo; }
};

CellRange overlap_cells(const Rat& origin, const Rat& w, long n, const Rat& a, const Rat& b) {
  CellRange r;
  if (b <= a) return r;
  const Rat ta = (a - origin) / w;
  const Rat tb = (b - origin) / w;
  r.lo = rat_floor_long(ta);
  r.hi = rat_floor_long(tb);
  if (Rat(r.hi) == tb) r.hi -= 1;  // touching the next cell only at its edge
  r.lo = std::max<long>(r.lo, 0);
  r.hi = std::min<long>(r.hi, n - 1);
  return r;
}

// Ring cells of the n-subdivision that overlap the cell rectangle
// [cx.lo..cx.hi] x [cy.lo..cy.hi]; emitted without duplicates.
template <typename Fn>
void for_each_ring_cell(long n, const CellRange& cx, const CellRange& cy, Fn&& fn) {
  if (cx.empty() || cy.empty()) return;
  for (long row : {0L, n - 1}) {
    if (row < cy.lo || row > cy.hi) continue;
    for (long kx = cx.lo; kx <= cx.hi; ++kx) fn(kx, row);
  }
  for (long col : {0L, n - 1}) {
    if (col < cx.lo || col > cx.hi) continue;
    for (long ky = std::max<long>(cy.lo, 1); ky <= std::min<long>(cy.hi, n - 2); ++ky) fn(col, ky);
  }
}

struct Integrator {
  const DensitySpec& spec;
  int depth;
  const UnitMasses& masses;

  Rat unit_piece(const Unit& unit, const RectR& rect) const {
    // rect is pre-clipped to unit.outer and has positive area.
    const Rat& delta = spec.params.delta;
    const Square core = unit.inner(delta);
    const Rat area_total = rect.area();
    const Rat area_core = rect.intersect(core.rect()).area();

    if (unit.birth == depth) {
      return spec.values.t_at(1) * area_core + spec.values.s_at(1) * (area_total - area_core);
    }

    const long n = spec.params.branching_at(unit.birth + 1);
    Rat ring_overlap_outer(0), ring_overlap_inner(0), children(0);

    auto visit_ring = [&](const Square& parent, Rat& overlap_acc) {
      const Rat w = parent.side / n;
      const CellRange cx = overlap_cells(parent.origin.x, w, n, rect.x0, rect.x1);
      const CellRange cy = overlap_cells(parent.origin.y, w, n, rect.y0, rect.y1);
      for_each_ring_cell(n, cx, cy, [&](long kx, long ky) {
        const long idx = ring_index_from_cell(n, kx, ky);
        const Square sq = ring_square(parent, n, idx);
        const RectR sub = rect.intersect(sq.rect());
        if (sub.empty()) return;
        overlap_acc += sub.area();
        if (rect.contains_rect(sq.rect())) {
          children += masses.U.at(static_cast<size_t>(unit.birth)) * sq.area();
        } else {
          children += unit_piece(Unit{sq, unit.birth + 1}, sub);
        }
      });
    };

    visit_ring(unit.outer, ring_overlap_outer);
    visit_ring(core, ring_overlap_inner);

    return spec.values.t_at(unit.birth + 1) * (area_core - ring_overlap_inner) +
           spec.values.s_at(unit.birth + 1) * (area_total - area_core - ring_overlap_outer) +
           children;
  }
};

std::string level_tag(int j) {
  std::ostringstream os;
  os << "level " << j;
  return os.str();
}

}  // namespace

std::pair<Rat, Rat> level_values(const ConstructionParams& params, int j) {
  if (j < 1 || j > params.depth) throw std::domain_error("level_values: level out of range");
  const Rat& delta = params.delta;
  const Rat& gamma = params.gamma;
  const Rat d2 = delta * delta;
  if (j == 1) {
    Rat s1 = gamma / (1 - d2);
    Rat t1 = (1 - gamma) / d2;
    return {s1, t1};
  }
  const long n = params.branching_at(j);
  const Rat rf = ring_fraction(n);
  // Core constraint: t_j*(d2 - rf*d2) + rf*d2 = 1-gamma.
  // Average-one constraint: s_j*(1 - d2 - rf) + (1-gamma) + rf = 1.
  const Rat t_den = d2 * (1 - rf);
  const Rat s_den = 1 - d2 - rf;
  if (t_den <= 0 || s_den <= 0)
    throw std::domain_error("level_values: degenerate geometry at " + level_tag(j));
  Rat t = ((1 - gamma) - rf * d2) / t_den;
  Rat s = (gamma - rf) / s_den;
  if (s <= 0)
    throw std::domain_error("level_values: s_" + std::to_string(j) +
                            " <= 0; gamma must exceed (4n-4)/n^2 at " + level_tag(j));
  if (t <= 0)
    throw std::domain_error("level_values: t_" + std::to_string(j) + " <= 0 at " + level_tag(j));
  return {s, t};
}

DensitySpec make_density_spec(const ConstructionParams& params) {
  const ValidationReport rep = validate_params(params);
  if (!rep.ok) {
    for (const auto& item : rep.items)
      if (!item.pass) throw std::invalid_argument("invalid params: " + item.rule + " (" + item.detail + ")");
  }
  DensitySpec spec;
  spec.params = params;
  spec.values.s.reserve(static_cast<size_t>(params.depth));
  spec.values.t.reserve(static_cast<size_t>(params.depth));
  for (int j = 1; j <= params.depth; ++j) {
    auto [s, t] = level_values(params, j);
    spec.values.s.push_back(std::move(s));
    spec.values.t.push_back(std::move(t));
  }
  return spec;
}

DensityValue evaluate(const DensitySpec& spec, const PointR& p, int depth) {
  if (depth < 1 || depth > spec.params.depth) throw std::domain_error("evaluate: depth out of range");
  if (!(p.x >= 0 && p.x < 1 && p.y >= 0 && p.y < 1))
    throw std::domain_error("evaluate: point outside [0,1)^2");
  Unit unit = root_unit();
  for (;;) {
    if (unit.birth == depth) {
      const bool in_core = unit.inner(spec.params.delta).contains_halfopen(p);
      return {in_core ? spec.values.t_at(1) : spec.values.s_at(1), depth};
    }
    const long n = spec.params.branching_at(unit.birth + 1);
    const Region region = locate(p, unit, spec.params.delta, n);
    switch (region.kind) {
      case RegionKind::TCore:
        return {spec.values.t_at(unit.birth + 1), unit.birth + 1};
      case RegionKind::SAnnulus:
        return {spec.values.s_at(unit.birth + 1), unit.birth + 1};
      default:
        unit = child_unit(unit, spec.params.delta, n, region.kind, region.index);
    }
  }
}

UnitMasses unit_masses(const DensitySpec& spec, int depth) {
  if (depth < 1 || depth > spec.params.depth) throw std::domain_error("unit_masses: depth out of range");
  const Rat d2 = spec.params.delta * spec.params.delta;
  UnitMasses m;
  m.U.assign(static_cast<size_t>(depth), Rat(0));
  m.V.assign(static_cast<size_t>(depth), Rat(0));
  m.U[static_cast<size_t>(depth) - 1] = spec.values.s_at(1) * (1 - d2) + spec.values.t_at(1) * d2;
  m.V[static_cast<size_t>(depth) - 1] = spec.values.t_at(1) * d2;
  for (int j = depth - 1; j >= 1; --j) {
    const long n = spec.params.branching_at(j + 1);
    const Rat rf = ring_fraction(n);
    const Rat& u_child = m.U[static_cast<size_t>(j)];
    m.U[static_cast<size_t>(j) - 1] = spec.values.t_at(j + 1) * d2 * (1 - rf) +
                                      spec.values.s_at(j + 1) * (1 - d2 - rf) +
                                      rf * (1 + d2) * u_child;
    m.V[static_cast<size_t>(j) - 1] =
        spec.values.t_at(j + 1) * d2 * (1 - rf) + rf * d2 * u_child;
  }
  return m;
}

Rat integrate(const DensitySpec& spec, const RectR& rect, int depth) {
  if (depth < 1 || depth > spec.params.depth) throw std::domain_error("integrate: depth out of range");
  const RectR clipped = rect.intersect(RectR{Rat(0), Rat(0), Rat(1), Rat(1)});
  if (clipped.empty()) return Rat(0);
  const UnitMasses masses = unit_masses(spec, depth);
  Integrator integ{spec, depth, masses};
  return integ.unit_piece(root_unit(), clipped);
}

ConstraintReport verify_constraints(const DensitySpec& spec, int depth, std::int64_t geo_budget) {
  if (depth < 1 || depth > spec.params.depth) throw std::domain_error("verify_constraints: depth out of range");
  ConstraintReport rep;
  const Rat& delta = spec.params.delta;
  const Rat target_core = 1 - spec.params.gamma;
  const UnitMasses masses = unit_masses(spec, depth);

  // Per-level masses. Units born at the same step are congruent up to
  // scaling, so each equality below covers every unit of its level.
  std::int64_t level_count = 1;
  for (int j = 1; j <= depth; ++j) {
    if (j > 1) level_count *= 8 * spec.params.branching_at(j) - 8;
    rep.units_checked += level_count;
    if (masses.U.at(static_cast<size_t>(j) - 1) != 1)
      rep.violations.push_back({j, "unit mass != area at " + level_tag(j) + ": U = " +
                                       fraction_string(masses.U[static_cast<size_t>(j) - 1])});
    if (masses.V.at(static_cast<size_t>(j) - 1) != target_core)
      rep.violations.push_back({j, "core mass != (1-gamma)*area at " + level_tag(j) + ": V = " +
                                       fraction_string(masses.V[static_cast<size_t>(j) - 1])});
  }

  // Ring layout audit, once per level (layouts are translates/scalings of
  // the side-1 layout): bijective cell mapping, exact band tiling, n squares
  // per edge, and the band clearing the core.
  for (int j = 2; j <= depth; ++j) {
    const long n = spec.params.branching_at(j);
    const Square unit_square{{Rat(0), Rat(0)}, Rat(1)};
    std::vector<char> seen(static_cast<size_t>(ring_count(n)), 0);
    long per_edge[4] = {0, 0, 0, 0};
    bool layout_ok = true;
    for (long i = 0; i < ring_count(n) && layout_ok; ++i) {
      const Square sq = ring_square(unit_square, n, i);
      if (sq.side * n != 1) layout_ok = false;
      const Rat kxr = sq.origin.x * n, kyr = sq.origin.y * n;
      if (!is_integer(kxr) || !is_integer(kyr)) { layout_ok = false; break; }
      const long kx = rat_floor_long(kxr), ky = rat_floor_long(kyr);
      const long back = ring_index_from_cell(n, kx, ky);
      if (back != i || seen[static_cast<size_t>(i)]) { layout_ok = false; break; }
      seen[static_cast<size_t>(i)] = 1;
      if (ky == 0) per_edge[0]++;
      if (kx == n - 1) per_edge[1]++;
      if (ky == n - 1) per_edge[2]++;
      if (kx == 0) per_edge[3]++;
    }
    if (layout_ok)
      layout_ok = per_edge[0] == n && per_edge[1] == n && per_edge[2] == n && per_edge[3] == n;
    // Total ring area must equal the band area 1 - (1 - 2/n)^2 exactly.
    const Rat w = Rat(1) / n;
    if (layout_ok) layout_ok = Rat(ring_count(n)) * w * w == 1 - (1 - 2 * w) * (1 - 2 * w);
    // Band width must clear the core: w < (1-delta)/2.
    if (layout_ok) layout_ok = 2 * w < 1 - delta;
    if (!layout_ok)
      rep.violations.push_back({j, "ring layout audit failed at " + level_tag(j)});
  }

  // Per-unit geometric audit: recompute both masses from the unit's own
  // geometry (core placement, ring band areas, child masses) and compare
  // exactly. Full enumeration while a level fits the budget, deterministic
  // stride sample beyond it.
  std::vector<Unit> sample = {root_unit()};
  for (int j = 1; j <= depth; ++j) {
    for (const Unit& unit : sample) {
      const Square core = unit.inner(delta);
      const Rat area = unit.outer.area();
      const Rat area_core = core.area();
      bool geom_ok = core.rect().x0 >= unit.outer.rect().x0 && core.rect().y0 >= unit.outer.rect().y0 &&
                     core.rect().x1 <= unit.outer.rect().x1 && core.rect().y1 <= unit.outer.rect().y1 &&
                     area_core == delta * delta * area;
      Rat total, core_mass;
      if (unit.birth == depth) {
        core_mass = spec.values.t_at(1) * area_core;
        total = core_mass + spec.values.s_at(1) * (area - area_core);
      } else {
        const long n = spec.params.branching_at(unit.birth + 1);
        const Rat ring_outer = Rat(ring_count(n)) * (unit.outer.side / n) * (unit.outer.side / n);
        const Rat ring_inner = Rat(ring_count(n)) * (core.side / n) * (core.side / n);
        const Rat& u_child = masses.U.at(static_cast<size_t>(unit.birth));
        core_mass = spec.values.t_at(unit.birth + 1) * (area_core - ring_inner) + ring_inner * u_child;
        total = core_mass + spec.values.s_at(unit.birth + 1) * (area - area_core - ring_outer) +
                ring_outer * u_child;
      }
      if (!geom_ok)
        rep.violations.push_back({unit.birth, "unit geometry audit failed at " + level_tag(unit.birth)});
      if (total != area)
        rep.violations.push_back({unit.birth, "geometric unit mass != area at " + level_tag(unit.birth)});
      if (core_mass != target_core * area)
        rep.violations.push_back({unit.birth, "geometric core mass != (1-gamma)*area at " + level_tag(unit.birth)});
      rep.units_geometric += 1;
    }
    if (j == depth) break;
    const long n = spec.params.branching_at(j + 1);
    const std::int64_t fanout = 2 * ring_count(n);
    const std::int64_t pool = static_cast<std::int64_t>(sample.size()) * fanout;
    const std::int64_t stride = std::max<std::int64_t>(1, (pool + geo_budget - 1) / geo_budget);
    std::vector<Unit> next;
    next.reserve(static_cast<size_t>(std::min<std::int64_t>(pool, geo_budget) + 1));
    std::int64_t g = 0;
    for (const Unit& unit : sample) {
      for (long k = 0; k < fanout; ++k, ++g) {
        if (g % stride != 0) continue;
        const bool outer_ring = k < ring_count(n);
        next.push_back(child_unit(unit, delta, n,
                                  outer_ring ? RegionKind::OuterRing : RegionKind::InnerRing,
                                  outer_ring ? k : k - ring_count(n)));
      }
    }
    sample = std::move(next);
  }

  return rep;
}

std::vector<Rat> raster(const DensitySpec& spec, int m, int depth, RasterMode mode) {
  if (m < 1) throw std::invalid_argument("raster: resolution must be >= 1");
  std::vector<Rat> grid;
  grid.reserve(static_cast<size_t>(m) * static_cast<size_t>(m));
  const Rat cell = Rat(1) / m;
  for (int row = 0; row < m; ++row) {
    const long gy = m - 1 - row;  // top-to-bottom rows
    for (int col = 0; col < m; ++col) {
      if (mode == RasterMode::CenterSample) {
        PointR p{Rat(2 * col + 1) / (2 * m), Rat(2 * gy + 1) / (2 * m)};
        grid.push_back(evaluate(spec, p, depth).value);
      } else {
        RectR r{cell * col, cell * gy, cell * (col + 1), cell * (gy + 1)};
        grid.push_back(integrate(spec, r, depth) * m * m);
      }
    }
  }
  return grid;
}

DensityBounds density_bounds(const DensitySpec& spec) {
  DensityBounds b;
  b.min_value = spec.values.s_at(1);
  b.max_value = spec.values.t_at(1);
  b.min_level = 1;
  b.max_level = 1;
  for (int j = 2; j <= spec.values.levels(); ++j) {
    if (spec.values.s_at(j) < b.min_value) {
      b.min_value = spec.values.s_at(j);
      b.min_level = j;
    }
    if (spec.values.t_at(j) > b.max_value) {
      b.max_value = spec.values.t_at(j);
      b.max_level = j;
    }
  }
  return b;
}

}  // namespace mcm
