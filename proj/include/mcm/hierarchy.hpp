#pragma once

#include "mcm/geometry.hpp"

#include <string>
#include <vector>

namespace mcm {

// Full recipe for the finite-depth density: core-square ratio delta, mass
// deficit gamma, per-level edge-covering counts n_2..n_J, and depth J.
struct ConstructionParams {
  Rat delta;
  Rat gamma;
  std::vector<long> branching;  // branching[j-2] = n_j, for j = 2..J
  int depth = 1;                // J
  bool strict_proof_mode = false;

  long branching_at(int level) const { return branching.at(static_cast<size_t>(level) - 2); }
};

struct ValidationItem {
  std::string rule;
  bool pass = false;
  int level = 0;  // offending level when applicable, 0 otherwise
  std::string detail;
};

struct ValidationReport {
  bool ok = false;
  std::vector<ValidationItem> items;
};

// Never throws; every invariant is reported pass/fail with the offending
// level index.
ValidationReport validate_params(const ConstructionParams& params);

// --- Ring layout ------------------------------------------------------
//
// The boundary band of a square of side s is tiled by 4n-4 squares of
// side s/n, n per edge with the four corner squares shared between
// adjacent edges. Indices run counterclockwise from the lower-left
// corner square.

long ring_count(long n);  // 4n-4

// Square at `index` of the ring of `parent`; index in [0, 4n-5].
Square ring_square(const Square& parent, long n, long index);

// Ring index of cell (kx, ky) in the n x n subdivision, or -1 when the
// cell is interior to the band.
long ring_index_from_cell(long n, long kx, long ky);

// Materialized layout in index order. Throws std::invalid_argument for n < 3.
std::vector<Square> ring_layout(const Square& parent, long n);
inline std::vector<Square> ring_layout(const Rat& side, long n) {
  return ring_layout(Square{{Rat(0), Rat(0)}, side}, n);
}

// --- Units and point location ----------------------------------------

// One (S', T') pair: outer square plus the concentric core at scale delta.
struct Unit {
  Square outer;
  int birth = 1;  // construction step that introduced this unit

  Square inner(const Rat& delta) const {
    Rat off = outer.side * (1 - delta) / 2;
    return Square{{outer.origin.x + off, outer.origin.y + off}, outer.side * delta};
  }
};

inline Unit root_unit() { return Unit{Square{{Rat(0), Rat(0)}, Rat(1)}, 1}; }

enum class RegionKind { OuterRing, InnerRing, TCore, SAnnulus };

struct Region {
  RegionKind kind;
  long index = -1;  // ring square index for the two ring kinds
};

// Locates `p` within the unit under the half-open convention. Throws
// std::domain_error when p lies outside S'.
Region locate(const PointR& p, const Unit& unit, const Rat& delta, long n);

// Child unit behind one ring square (outer or inner ring).
Unit child_unit(const Unit& unit, const Rat& delta, long n, RegionKind ring, long index);

// All 8n-8 children: outer-ring children first (indices 0..4n-5), then
// inner-ring children, both in ring index order.
std::vector<Unit> unit_children(const Unit& unit, const Rat& delta, long n);

// --- Addresses --------------------------------------------------------

struct ChildStep {
  RegionKind ring;  // OuterRing or InnerRing
  long index = 0;
};

// Canonical name of one unit: the path of ring choices from the root.
struct UnitAddress {
  std::vector<ChildStep> path;

  // Resolves the address against params; validates each step.
  Unit resolve(const ConstructionParams& params) const;
};

}  // namespace mcm
