#pragma once

#include "mcm/curves.hpp"
#include "mcm/density.hpp"

#include <vector>

namespace mcm {

struct Net {
  std::vector<Vec2d> points;
  long grid_m = 0;       // diffusion grid resolution; separation >= 1/grid_m by construction
  double separation = 0; // measured r
  double covering = 0;   // measured R
};

// Lays an m x m grid with m chosen so that no cell holds more than unit
// mass at scale k (m is additionally rounded so small-denominator cores
// align with cell boundaries), then places at most one point per cell, at
// the cell center, by serpentine error diffusion of the exact cell masses
// times k^2. Throws std::invalid_argument for k < 8 (invalid scale).
Net generate_net(const DensitySpec& spec, int depth, long k);

struct NetStats {
  double r = 0;  // min pairwise distance
  double R = 0;  // covering radius over a probe grid
};

// probe_resolution <= 0 picks 4x the bucket resolution.
NetStats net_stats(const std::vector<Vec2d>& points, int probe_resolution = 0);

struct MatchResult {
  std::vector<int> assignment;  // for each A index, the matched B index
  double total_squared_cost = 0;
  double bilipschitz = 1;  // max over point pairs of matched distance ratio (and inverse)
  size_t matched = 0;
};

// Minimum-cost assignment under squared Euclidean cost; the reported
// constant is an upper-bound heuristic for the optimal distortion, never a
// lower bound. Inputs larger than max_points are deterministically
// subsampled; unequal sizes after subsampling throw.
MatchResult match_distortion(const std::vector<Vec2d>& a, const std::vector<Vec2d>& b,
                             size_t max_points = 3000);

}  // namespace mcm
