#include "mcm/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mcm {

namespace {

// Relative slack for premises that sit exactly on their bound after rounding.
constexpr double kPremiseSlack = 1e-9;

double hypot2(double dx, double dy) { return std::hypot(dx, dy); }

}  // namespace

CurveLengths lengths(const PolylineD& poly) {
  if (poly.vertices.size() < 2) throw std::invalid_argument("lengths: need >= 2 vertices");
  CurveLengths out;
  for (size_t k = 0; k + 1 < poly.vertices.size(); ++k) {
    const double dx = poly.vertices[k + 1].x - poly.vertices[k].x;
    const double dy = poly.vertices[k + 1].y - poly.vertices[k].y;
    out.length += hypot2(dx, dy);
    out.vertical += std::fabs(dy);
  }
  return out;
}

CurveLengthsR lengths(const PolylineR& poly) {
  if (poly.vertices.size() < 2) throw std::invalid_argument("lengths: need >= 2 vertices");
  CurveLengthsR out;
  out.vertical = Rat(0);
  for (size_t k = 0; k + 1 < poly.vertices.size(); ++k) {
    const Rat dx = poly.vertices[k + 1].x - poly.vertices[k].x;
    const Rat dy = poly.vertices[k + 1].y - poly.vertices[k].y;
    out.length += hypot2(to_double(dx), to_double(dy));
    out.vertical += dy >= 0 ? dy : Rat(-dy);
  }
  return out;
}

VlBoundReport vl_bound_check(const PolylineD& poly, double K, double b, double alpha) {
  if (poly.vertices.size() < 2) throw std::invalid_argument("vl_bound_check: need >= 2 vertices");
  VlBoundReport rep;
  rep.premise_alpha = alpha > 0 && alpha < 1;
  const Vec2d& a = poly.vertices.front();
  const Vec2d& z = poly.vertices.back();
  rep.premise_level_endpoints = a.y == z.y;
  const CurveLengths len = lengths(poly);
  const double chord = std::fabs(z.x - a.x);
  rep.premise_distance = chord > K * b * (1 - alpha);
  rep.premise_length = len.length <= K * b * (1 + kPremiseSlack);

  const double root = std::sqrt(std::max(0.0, alpha * (2 - alpha)));
  rep.chord_bound = K * b / 2 * root;
  rep.vl_bound = K * b * root;
  rep.vertical_length = len.vertical;
  rep.max_chord_distance = 0;
  for (const Vec2d& v : poly.vertices)
    rep.max_chord_distance = std::max(rep.max_chord_distance, std::fabs(v.y - a.y));
  rep.chord_margin = rep.chord_bound - rep.max_chord_distance;
  rep.vl_margin = rep.vl_bound - rep.vertical_length;
  rep.ok = rep.premises_hold() && rep.max_chord_distance < rep.chord_bound &&
           rep.vertical_length < rep.vl_bound;
  return rep;
}

NiceReport nice_rectangles(const EdgeMapSample& sample) {
  if (sample.N < 7 || sample.N % 7 != 0)
    throw std::invalid_argument("nice_rectangles: N must be a positive multiple of 7");
  if (sample.bottom.size() != static_cast<size_t>(sample.N) + 1 ||
      sample.top.size() != static_cast<size_t>(sample.N) + 1)
    throw std::invalid_argument("nice_rectangles: image lists must have N+1 points");

  NiceReport rep;
  rep.blocks = sample.N / 7;
  const double block_threshold = sample.K * (1 - 2 * sample.alpha) * 7 * sample.h;
  const double stretch_cap = 7 * sample.K * sample.h * (1 + kPremiseSlack);

  rep.premise_stretch = true;
  for (long i = 1; i <= rep.blocks; ++i) {
    const Vec2d& pa = sample.bottom[static_cast<size_t>(7 * (i - 1))];
    const Vec2d& pb = sample.bottom[static_cast<size_t>(7 * i)];
    if (hypot2(pb.x - pa.x, pb.y - pa.y) > stretch_cap) rep.premise_stretch = false;
    if (std::fabs(pa.x - pb.x) > block_threshold) rep.nice_indices.push_back(i);
  }
  rep.count = static_cast<long>(rep.nice_indices.size());

  const double endpoint_gap =
      std::fabs(sample.bottom.front().x - sample.bottom.back().x);
  rep.premise_endpoint = endpoint_gap > sample.K * (1 - sample.alpha) * sample.base_length();

  rep.count_exceeds_fourteenth = 14 * rep.count > sample.N;
  rep.counting_ok = !(rep.premise_endpoint && rep.premise_stretch) || rep.count_exceeds_fourteenth;
  return rep;
}

DisjointnessReport projection_disjointness(const EdgeMapSample& sample,
                                           const std::vector<Vec2d>& mid_square_image,
                                           const PolylineD& left_side_image,
                                           const PolylineD& right_side_image, long i) {
  if (i < 1 || i > sample.N / 7) throw std::invalid_argument("projection_disjointness: block index out of range");
  if (mid_square_image.empty() || left_side_image.vertices.empty() || right_side_image.vertices.empty())
    throw std::invalid_argument("projection_disjointness: missing geometry");

  DisjointnessReport rep;
  const Vec2d& pa = sample.bottom[static_cast<size_t>(7 * (i - 1))];
  const Vec2d& pb = sample.bottom[static_cast<size_t>(7 * i)];
  rep.nice = std::fabs(pa.x - pb.x) > sample.K * (1 - 2 * sample.alpha) * 7 * sample.h;
  rep.alpha_in_range = sample.alpha > 0 && sample.alpha < 1.0 / 14.0;
  rep.report_only = !(rep.nice && rep.alpha_in_range);
  rep.predicted_gap = sample.K * sample.h * (1 - 14 * sample.alpha);

  auto x_interval = [](auto&& points, double out[2]) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const Vec2d& p : points) {
      lo = std::min(lo, p.x);
      hi = std::max(hi, p.x);
    }
    out[0] = lo;
    out[1] = hi;
  };
  x_interval(mid_square_image, rep.mid_interval);
  x_interval(left_side_image.vertices, rep.left_interval);
  x_interval(right_side_image.vertices, rep.right_interval);

  auto gap = [](const double a[2], const double b[2]) {
    return std::max(b[0] - a[1], a[0] - b[1]);
  };
  rep.gap_left = gap(rep.mid_interval, rep.left_interval);
  rep.gap_right = gap(rep.mid_interval, rep.right_interval);
  rep.disjoint_left = rep.gap_left > 0;
  rep.disjoint_right = rep.gap_right > 0;
  rep.ok = rep.report_only || (rep.disjoint_left && rep.disjoint_right);
  return rep;
}

}  // namespace mcm
