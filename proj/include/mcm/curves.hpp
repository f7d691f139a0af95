#pragma once

#include "mcm/rational.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mcm {

template <typename T>
struct Vec2 {
  T x{}, y{};
};

using Vec2d = Vec2<double>;
using Vec2r = Vec2<Rat>;

// Discrete curve; the proof inequalities are checked on polylines, where the
// supremum over refinements in the length definitions is attained at the
// vertices.
template <typename T>
struct Polyline {
  std::vector<Vec2<T>> vertices;

  size_t segment_count() const {
    return vertices.size() < 2 ? 0 : vertices.size() - 1;
  }
};

using PolylineD = Polyline<double>;
using PolylineR = Polyline<Rat>;

struct CurveLengths {
  double length = 0;    // sum of Euclidean segment lengths
  double vertical = 0;  // sum of |dy|
};

CurveLengths lengths(const PolylineD& poly);

struct CurveLengthsR {
  double length = 0;
  Rat vertical;  // exact
};

CurveLengthsR lengths(const PolylineR& poly);

// Segment permutation: all nonnegative-dy segments first (ascending run from
// the first endpoint up to the peak), then the negative-dy segments
// descending to the last endpoint. Input order is preserved inside each run.
// Lengths and vertical length are conserved exactly; with endpoints at equal
// height y0, vl = 2*(peak.y - y0). Throws std::invalid_argument when the
// endpoint heights differ.
template <typename T>
struct Rearranged {
  Polyline<T> poly;
  Vec2<T> peak;
};

template <typename T>
Rearranged<T> monotone_rearrange(const Polyline<T>& poly) {
  if (poly.vertices.size() < 2) throw std::invalid_argument("monotone_rearrange: need >= 2 vertices");
  if (poly.vertices.front().y != poly.vertices.back().y)
    throw std::invalid_argument("monotone_rearrange: endpoints must be at equal height");
  std::vector<Vec2<T>> up, down;
  up.reserve(poly.segment_count());
  for (size_t k = 0; k + 1 < poly.vertices.size(); ++k) {
    Vec2<T> d{poly.vertices[k + 1].x - poly.vertices[k].x,
              poly.vertices[k + 1].y - poly.vertices[k].y};
    if (d.y >= 0)
      up.push_back(d);
    else
      down.push_back(d);
  }
  Rearranged<T> out;
  out.poly.vertices.reserve(poly.vertices.size());
  Vec2<T> cur = poly.vertices.front();
  out.poly.vertices.push_back(cur);
  for (const auto& d : up) {
    cur = Vec2<T>{cur.x + d.x, cur.y + d.y};
    out.poly.vertices.push_back(cur);
  }
  out.peak = cur;
  for (const auto& d : down) {
    cur = Vec2<T>{cur.x + d.x, cur.y + d.y};
    out.poly.vertices.push_back(cur);
  }
  return out;
}

// Conditional check of the gardener's-ellipse bound: for a curve with
// endpoints on a common horizontal line at distance > K*b*(1-alpha) and
// length at most K*b, every point stays within K*b/2 * sqrt(alpha*(2-alpha))
// of the endpoint line, and vl < K*b * sqrt(alpha*(2-alpha)). Premise
// violations are reported, never thrown; the bound is vacuous without them.
struct VlBoundReport {
  bool premise_alpha = false;
  bool premise_level_endpoints = false;
  bool premise_distance = false;
  bool premise_length = false;
  bool premises_hold() const {
    return premise_alpha && premise_level_endpoints && premise_distance && premise_length;
  }
  double chord_bound = 0;  // K*b/2 * sqrt(alpha*(2-alpha))
  double vl_bound = 0;     // twice the above
  double max_chord_distance = 0;
  double vertical_length = 0;
  double chord_margin = 0;  // bound minus observed; positive is compliant
  double vl_margin = 0;
  bool ok = false;  // premises hold and both strict inequalities observed
};

VlBoundReport vl_bound_check(const PolylineD& poly, double K, double b, double alpha);

// Images of the N+1 bottom and top lattice points of a covered edge, h the
// covering-square side, K the stretch constant, alpha the slack parameter.
struct EdgeMapSample {
  long N = 0;
  double h = 0;
  std::vector<Vec2d> bottom;
  std::vector<Vec2d> top;
  double K = 0;
  double alpha = 0;

  double base_length() const { return static_cast<double>(N) * h; }
};

// Seven-square block R_i with i running 1..N/7; a block is nice when its
// endpoint images are horizontally separated by more than K*(1-2*alpha)*7h.
struct NiceReport {
  std::vector<long> nice_indices;  // 1-based block indices
  bool premise_endpoint = false;   // |pi_x(phi(a)) - pi_x(phi(b))| > K(1-alpha)Nh
  bool premise_stretch = false;    // every 7h block displacement <= 7Kh
  long count = 0;
  long blocks = 0;                       // N/7
  bool count_exceeds_fourteenth = false; // 14*count > N
  bool counting_ok = false;              // premises hold implies count > N/14
};

NiceReport nice_rectangles(const EdgeMapSample& sample);

struct DisjointnessReport {
  bool nice = false;            // recomputed niceness of block i
  bool alpha_in_range = false;  // alpha < 1/14 (gap prediction positive)
  bool report_only = false;     // premises missing: intervals reported, nothing asserted
  double predicted_gap = 0;     // K*h*(1-14*alpha)
  double mid_interval[2] = {0, 0};
  double left_interval[2] = {0, 0};
  double right_interval[2] = {0, 0};
  double gap_left = 0;   // x-projection gap between mid square and left side image
  double gap_right = 0;
  bool disjoint_left = false;
  bool disjoint_right = false;
  bool ok = false;
};

// x-projection disjointness of the middle square's image from the two side
// segment images of block i (1-based). Throws std::invalid_argument when the
// geometry is missing.
DisjointnessReport projection_disjointness(const EdgeMapSample& sample,
                                           const std::vector<Vec2d>& mid_square_image,
                                           const PolylineD& left_side_image,
                                           const PolylineD& right_side_image, long i);

}  // namespace mcm
