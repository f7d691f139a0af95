#pragma once

#include "mcm/rational.hpp"

namespace mcm {

struct PointR {
  Rat x, y;
};

// Axis-aligned rectangle [x0, x1] x [y0, y1]. Degenerate (x0 >= x1 or
// y0 >= y1) rectangles have zero area and behave as empty for integration.
struct RectR {
  Rat x0, y0, x1, y1;

  Rat width() const { return x1 - x0; }
  Rat height() const { return y1 - y0; }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
  Rat area() const { return empty() ? Rat(0) : width() * height(); }

  RectR intersect(const RectR& o) const {
    RectR r;
    r.x0 = x0 > o.x0 ? x0 : o.x0;
    r.y0 = y0 > o.y0 ? y0 : o.y0;
    r.x1 = x1 < o.x1 ? x1 : o.x1;
    r.y1 = y1 < o.y1 ? y1 : o.y1;
    return r;
  }

  bool contains_rect(const RectR& o) const {
    return x0 <= o.x0 && y0 <= o.y0 && x1 >= o.x1 && y1 >= o.y1;
  }

  // Half-open membership [x0, x1) x [y0, y1); the convention used for
  // point location so shared edges resolve deterministically.
  bool contains_halfopen(const PointR& p) const {
    return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1;
  }
};

struct Square {
  PointR origin;
  Rat side;

  RectR rect() const { return RectR{origin.x, origin.y, origin.x + side, origin.y + side}; }
  PointR center() const { return PointR{origin.x + side / 2, origin.y + side / 2}; }
  Rat area() const { return side * side; }
  bool contains_halfopen(const PointR& p) const { return rect().contains_halfopen(p); }
};

}  // namespace mcm
