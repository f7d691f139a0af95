#pragma once

#include "mcm/curves.hpp"
#include "mcm/density.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mcm {

// Forward maps push rho*lambda to lambda (area of the image of E equals the
// mass of E); Inverse is the lattice map of the inverse bijection.
enum class MapDirection { Forward, Inverse };

// Strip model behind a transport grid map: exact column prefix masses F and
// per-strip conditional prefixes G of the cell-averaged measure. The model
// map is affine on every grid cell.
struct KrModel {
  int m = 0;
  MapDirection direction = MapDirection::Forward;
  std::vector<double> F;               // m+1 column-boundary prefix masses
  std::vector<std::vector<double>> G;  // per strip: m+1 conditional prefixes
  std::vector<std::vector<double>> cell_mass;  // [strip][cell] exact masses
};

struct GridMap {
  int m = 0;
  std::vector<Vec2d> vertices;  // (m+1)^2 images of the vertex lattice, index j*(m+1)+i
  std::optional<KrModel> model;
  std::vector<std::string> warnings;

  const Vec2d& at(int i, int j) const { return vertices[static_cast<size_t>(j) * (m + 1) + i]; }
  Vec2d& at(int i, int j) { return vertices[static_cast<size_t>(j) * (m + 1) + i]; }

  // Model evaluation when a model is attached, bilinear interpolation of the
  // vertex lattice otherwise.
  Vec2d map_point(double x, double y) const;

  static GridMap from_function(int m, const std::function<Vec2d(double, double)>& f);
};

// Coordinatewise monotone rearrangement between rho_depth*lambda and lambda,
// from exact column and cell masses. Lattice x-images are the exact marginal
// prefix masses; vertex y-images use the conditional of the two adjacent
// strips (mass-weighted). Requires m >= 8; too-coarse m for the requested
// depth degrades accuracy and is reported as a warning, not an error.
GridMap kr_map(const DensitySpec& spec, int depth, int m, MapDirection direction);

// Same construction from an arbitrary exact cell-mass oracle.
using CellMassFn = std::function<Rat(const RectR&)>;
GridMap kr_map_from_masses(int m, const CellMassFn& mass, MapDirection direction);

// Area of the image of [x0,x1]x[y0,y1] under the strip-model map. Exact
// pushforward of the cell-averaged measure, up to double rounding. Requires
// a forward model.
double model_image_area(const GridMap& map, double x0, double y0, double x1, double y1);

struct MassAudit {
  double mean_cell_error = 0;  // mean |cell image quad area - exact cell mass|
  double max_cell_error = 0;
  double total_quad_area = 0;
  long negative_cells = 0;  // cells whose image quad is not positively oriented
  bool orientation_ok() const { return negative_cells == 0; }
};

// Per-cell pushforward audit from the vertex lattice (shoelace quad areas
// against exact cell masses).
MassAudit pushforward_audit(const GridMap& map, const DensitySpec& spec, int depth);

struct StretchPair {
  Vec2d a, b;  // domain points
  double ratio = 0;
};

struct BilipschitzReport {
  double K_emp = 0;
  double max_stretch = 0;
  double min_stretch = 0;
  StretchPair max_pair, min_pair;
  bool injective_at_lattice = true;  // false when image points coincide
  unsigned long seed = 0;
  long random_pairs = 0;
};

// Max/min of image-to-domain distance ratios over all lattice-neighbor pairs
// plus `pair_budget` seeded random long-range pairs.
BilipschitzReport empirical_bilipschitz(const GridMap& map, long pair_budget, unsigned long seed);

struct LatticeRegion {
  int i0 = 0, j0 = 0, i1 = 0, j1 = 0;  // cell ranges [i0,i1) x [j0,j1)
};

// Total 1-d measure of the vertical line at x intersected with the polygonal
// image of the region (cell-wise clipping of image quads).
double vertical_cuts(const GridMap& map, const LatticeRegion& region, double x);

struct ReplayBlockRow {
  long i = 0;
  bool nice = false;
  double endpoint_dx = 0;    // |pi_x phi(a_i) - pi_x phi(b_i)|
  bool disjoint_ok = false;  // projection disjointness for nice blocks
  double v_len = 0, c_len = 0;  // measured lambda_1(V_i), lambda_1(C_i)
  double hV = 0, hC = 0;        // mean vertical-cut lengths over V_i, C_i
  double du = 0, dl = 0;        // |u' - u| at the max cut, |l' - l| at the min cut
};

struct ReplayDiagnostics {
  long N = 0;
  double h = 0, b = 0, K = 0, alpha = 0;
  NiceReport nice;
  std::vector<ReplayBlockRow> rows;
  double sum_pairs = 0;   // sum over nice blocks of (|u'-l'| + |u-l|)
  double q = 0;           // from the density parameters
  double delta_bound = 0; // q*h/K
  double omega = 0;       // Delta*N/14 - K*b*sqrt(alpha*(2-alpha))
  double vl_bottom = 0;   // vl of the mapped bottom edge
  double length_top = 0;  // measured length of the mapped upper boundary P
  double vl_top = 0;
  double length_lower_bound = 0;  // sqrt(Omega^2 + (K*b*(1-alpha))^2)
  double length_upper_bound = 0;  // K*(N+2)*h
  bool premises_ok = false;
  double band_mass_rel_error = 0;  // Theorem-3 audit over the replayed band
};

// Replays the proof diagnostics on the bottom edge of the unit square, which
// is covered by N = n_2 squares of side h = 1/n_2 (depth >= 2).
ReplayDiagnostics proof_replay(const GridMap& map, const DensitySpec& spec, double K, double alpha);

}  // namespace mcm
