#pragma once

#include "mcm/hierarchy.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mcm {

// Per-level constants: on a unit born at step j-1 the core not covered by
// deeper squares carries t_j, the annulus s_j. 1-indexed accessors.
struct LevelValues {
  std::vector<Rat> s;
  std::vector<Rat> t;

  const Rat& s_at(int j) const { return s.at(static_cast<size_t>(j) - 1); }
  const Rat& t_at(int j) const { return t.at(static_cast<size_t>(j) - 1); }
  Rat& s_at(int j) { return s.at(static_cast<size_t>(j) - 1); }
  Rat& t_at(int j) { return t.at(static_cast<size_t>(j) - 1); }
  int levels() const { return static_cast<int>(s.size()); }
};

struct DensitySpec {
  ConstructionParams params;
  LevelValues values;
};

// Exact solution of the two constraint equations at level j (closed form for
// j = 1). Throws std::domain_error when the solution is nonpositive, naming
// the violated invariant.
std::pair<Rat, Rat> level_values(const ConstructionParams& params, int j);

// Validates params (throws std::invalid_argument with the first failing rule
// on failure) and solves every level.
DensitySpec make_density_spec(const ConstructionParams& params);

struct DensityValue {
  Rat value;
  int birth;  // construction step at which this value was painted
};

// Value of rho_depth at a point of [0,1)^2. Throws std::domain_error outside.
DensityValue evaluate(const DensitySpec& spec, const PointR& p, int depth);

// Exact integral of rho_depth over rect (clipped to the unit square).
Rat integrate(const DensitySpec& spec, const RectR& rect, int depth);

// Normalized unit masses: U[j] = (integral of rho_depth over a unit born at
// step j) / area, V[j] = (integral over its core) / area. Both are
// independent of the particular unit; U = 1 and V = 1-gamma for a correctly
// solved spec.
struct UnitMasses {
  std::vector<Rat> U;  // 1-indexed via [j-1]
  std::vector<Rat> V;
};
UnitMasses unit_masses(const DensitySpec& spec, int depth);

struct ConstraintViolation {
  int level = 0;
  std::string what;
};

struct ConstraintReport {
  std::int64_t units_checked = 0;
  std::int64_t units_geometric = 0;  // units re-audited through explicit geometry
  std::vector<ConstraintViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Asserts, for every unit up to `depth`, that the density integrates to
// area(S') over S' and to (1-gamma)*area(S') over T', as exact rational
// equalities. Per-level masses are exact for all units at once (units of a
// level are congruent up to scaling); on top of that, units are re-audited
// one by one through explicit ring geometry, up to geo_budget units per level
// (deterministic stride sample beyond the budget).
ConstraintReport verify_constraints(const DensitySpec& spec, int depth,
                                    std::int64_t geo_budget = 4096);

enum class RasterMode { CenterSample, CellAverage };

// m x m grid of exact values, row-major with rows top-to-bottom (image
// convention). Cell-average mode integrates per cell; center-sample
// evaluates at cell centers.
std::vector<Rat> raster(const DensitySpec& spec, int m, int depth, RasterMode mode);

struct DensityBounds {
  Rat min_value, max_value;
  int min_level = 0, max_level = 0;
};
DensityBounds density_bounds(const DensitySpec& spec);

}  // namespace mcm
