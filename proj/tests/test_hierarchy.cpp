#include "mcm/hierarchy.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace mcm;

namespace {

bool rule_passed(const ValidationReport& rep, const std::string& rule) {
  for (const auto& item : rep.items)
    if (item.rule == rule && !item.pass) return false;
  return true;
}

ConstructionParams params(const Rat& delta, const Rat& gamma, std::vector<long> branching,
                          bool strict = false) {
  ConstructionParams p;
  p.delta = delta;
  p.gamma = gamma;
  p.branching = std::move(branching);
  p.depth = static_cast<int>(p.branching.size()) + 1;
  p.strict_proof_mode = strict;
  return p;
}

// Interior disjointness of two squares via exact interval tests.
bool interiors_disjoint(const Square& a, const Square& b) {
  const RectR ra = a.rect(), rb = b.rect();
  return ra.x1 <= rb.x0 || rb.x1 <= ra.x0 || ra.y1 <= rb.y0 || rb.y1 <= ra.y0;
}

}  // namespace

TEST_CASE("validate_params: positivity constraint rejects n=7 at gamma=1/100") {
  const auto rep = validate_params(params(Rat(1, 3), Rat(1, 100), {7}));
  CHECK_FALSE(rep.ok);
  CHECK_FALSE(rule_passed(rep, "annulus-positivity"));
  // (4n-4)/n^2 = 24/49 at n = 7, far above gamma
  CHECK(rule_passed(rep, "branching-multiple-of-7"));
  CHECK(rule_passed(rep, "ring-band-fits"));
}

TEST_CASE("validate_params: n=406 passes at gamma=1/100") {
  // 406 = 7*58 and (4*406-4)/406^2 = 1620/164836 < 1/100
  CHECK(rat(1620, 164836) < Rat(1, 100));
  CHECK(validate_params(params(Rat(1, 3), Rat(1, 100), {406})).ok);
}

TEST_CASE("validate_params: strict proof mode ranges") {
  CHECK(validate_params(params(Rat(1, 15), Rat(1, 20), {84}, true)).ok);
  // delta = 1/3 violates delta < 1/14 in strict mode only
  const auto strict = validate_params(params(Rat(1, 3), Rat(1, 100), {406}, true));
  CHECK_FALSE(strict.ok);
  CHECK_FALSE(rule_passed(strict, "strict-delta"));
  CHECK(validate_params(params(Rat(1, 3), Rat(1, 100), {406}, false)).ok);
}

TEST_CASE("ring_layout: 4n-4 squares of side s/n") {
  const auto squares = ring_layout(Rat(1), 7);
  REQUIRE(squares.size() == 24);
  for (const auto& sq : squares) CHECK(sq.side == Rat(1, 7));
  // square 0 sits at the parent origin
  CHECK(squares[0].origin.x == 0);
  CHECK(squares[0].origin.y == 0);
  CHECK_THROWS_AS(ring_layout(Rat(1), 2), std::invalid_argument);
}

TEST_CASE("ring_layout: exact band area and brute-force rasterization agree") {
  const auto squares = ring_layout(Rat(1), 7);
  Rat sum(0);
  for (const auto& sq : squares) sum += sq.area();
  CHECK(sum == Rat(24, 49));  // 1 - (5/7)^2

  // rasterize: count subcell centers covered by exactly one ring square
  const int res = 7 * 6;
  long covered = 0;
  for (int i = 0; i < res; ++i) {
    for (int j = 0; j < res; ++j) {
      const PointR c{rat(2 * i + 1, 2 * res), rat(2 * j + 1, 2 * res)};
      int hits = 0;
      for (const auto& sq : squares)
        if (sq.contains_halfopen(c)) ++hits;
      CHECK(hits <= 1);
      covered += hits;
    }
  }
  CHECK(rat(covered, static_cast<long>(res) * res) == Rat(24, 49));
}

TEST_CASE("ring_layout: pairwise interior-disjoint, each edge covered by n squares") {
  for (long n : {7L, 14L, 21L}) {
    const auto squares = ring_layout(Rat(3, 5), n);
    REQUIRE(static_cast<long>(squares.size()) == 4 * n - 4);
    for (size_t a = 0; a < squares.size(); ++a)
      for (size_t b = a + 1; b < squares.size(); ++b)
        CHECK(interiors_disjoint(squares[a], squares[b]));
    long bottom = 0, top = 0, left = 0, right = 0;
    for (const auto& sq : squares) {
      if (sq.origin.y == 0) ++bottom;
      if (sq.origin.x == 0) ++left;
      if (sq.rect().x1 == Rat(3, 5)) ++right;
      if (sq.rect().y1 == Rat(3, 5)) ++top;
    }
    CHECK(bottom == n);
    CHECK(top == n);
    CHECK(left == n);
    CHECK(right == n);
  }
}

TEST_CASE("ring_layout scales with the parent") {
  const Rat delta(1, 3);
  const auto unit = ring_layout(Rat(1), 7);
  const auto scaled = ring_layout(Square{{Rat(0), Rat(0)}, delta}, 7);
  for (size_t i = 0; i < unit.size(); ++i) {
    CHECK(scaled[i].origin.x == unit[i].origin.x * delta);
    CHECK(scaled[i].origin.y == unit[i].origin.y * delta);
    CHECK(scaled[i].side == unit[i].side * delta);
  }
}

TEST_CASE("locate: tags for center, corner, and bottom edge") {
  const Unit unit = root_unit();
  const Rat delta(1, 3);
  const long n = 7;

  CHECK(locate(PointR{Rat(1, 2), Rat(1, 2)}, unit, delta, n).kind == RegionKind::TCore);
  const Region corner = locate(PointR{Rat(0), Rat(0)}, unit, delta, n);
  CHECK(corner.kind == RegionKind::OuterRing);
  CHECK(corner.index == 0);

  // bottom edge, halfway along: must be the outer ring square containing x=1/2
  const Region bottom = locate(PointR{Rat(1, 2), Rat(1, 14)}, unit, delta, n);
  CHECK(bottom.kind == RegionKind::OuterRing);
  const auto squares = ring_layout(Rat(1), n);
  CHECK(squares[static_cast<size_t>(bottom.index)].contains_halfopen(PointR{Rat(1, 2), Rat(1, 14)}));

  CHECK_THROWS_AS(locate(PointR{Rat(2), Rat(0)}, unit, delta, n), std::domain_error);
  CHECK_THROWS_AS(locate(PointR{Rat(1), Rat(1, 2)}, unit, delta, n), std::domain_error);  // half-open
}

TEST_CASE("locate is a partition consistent with the materialized layout") {
  const Unit unit = root_unit();
  const Rat delta(1, 3);
  std::mt19937_64 rng(20240817);
  long violations = 0;
  for (long n : {7L, 14L}) {
    const auto outer = ring_layout(Rat(1), n);
    const auto inner = ring_layout(unit.inner(delta), n);
    std::uniform_int_distribution<long> num(0, 9999);
    for (int trial = 0; trial < 50000; ++trial) {
      const PointR p{rat(num(rng), 10000), rat(num(rng), 10000)};
      const Region r = locate(p, unit, delta, n);
      int outer_hits = 0, inner_hits = 0;
      for (const auto& sq : outer)
        if (sq.contains_halfopen(p)) ++outer_hits;
      for (const auto& sq : inner)
        if (sq.contains_halfopen(p)) ++inner_hits;
      bool ok = true;
      switch (r.kind) {
        case RegionKind::OuterRing:
          ok = outer_hits == 1 && outer[static_cast<size_t>(r.index)].contains_halfopen(p);
          break;
        case RegionKind::InnerRing:
          ok = outer_hits == 0 && inner_hits == 1 &&
               inner[static_cast<size_t>(r.index)].contains_halfopen(p);
          break;
        case RegionKind::TCore:
          ok = outer_hits == 0 && inner_hits == 0 && unit.inner(delta).contains_halfopen(p);
          break;
        case RegionKind::SAnnulus:
          ok = outer_hits == 0 && inner_hits == 0 && !unit.inner(delta).contains_halfopen(p);
          break;
      }
      if (!ok) ++violations;
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("ring squares never overlap the core") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> dpick(2, 8);
  for (int trial = 0; trial < 20; ++trial) {
    const Rat delta(1, dpick(rng));
    long n = 7;
    while (Rat(n) * (1 - delta) <= 2) n += 7;
    const Unit unit = root_unit();
    const Square core = unit.inner(delta);
    for (const auto& sq : ring_layout(Rat(1), n)) CHECK(interiors_disjoint(sq, core));
  }
}

TEST_CASE("unit_children: counts, sides, and area sum") {
  const Rat delta(1, 3);
  const auto children = unit_children(root_unit(), delta, 7);
  REQUIRE(children.size() == 48);
  long outer = 0, inner = 0;
  Rat area_sum(0);
  for (const auto& c : children) {
    CHECK(c.birth == 2);
    if (c.outer.side == Rat(1, 7)) ++outer;
    if (c.outer.side == delta / 7) ++inner;
    area_sum += c.outer.area();
  }
  CHECK(outer == 24);
  CHECK(inner == 24);
  CHECK(area_sum == Rat(24, 49) * (1 + delta * delta));

  // brute-force rasterization of the union; resolution resolves both rings
  const int res = 126;
  long covered = 0;
  for (int i = 0; i < res; ++i)
    for (int j = 0; j < res; ++j) {
      const PointR c{rat(2 * i + 1, 2 * res), rat(2 * j + 1, 2 * res)};
      for (const auto& child : children)
        if (child.outer.contains_halfopen(c)) {
          ++covered;
          break;
        }
    }
  CHECK(rat(covered, static_cast<long>(res) * res) == Rat(24, 49) * (1 + delta * delta));
}

TEST_CASE("largest child side tracks the level scale h_j") {
  // from a largest level-(j-1) square, outer children have side h_{j-1}/n_j
  const Rat delta(1, 3);
  Unit unit = root_unit();
  const std::vector<long> branching = {7, 14};
  Rat h(1);
  for (size_t step = 0; step < branching.size(); ++step) {
    const long n = branching[step];
    h /= n;
    Rat largest(0);
    for (const auto& c : unit_children(unit, delta, n))
      if (c.outer.side > largest) largest = c.outer.side;
    CHECK(largest == h);
    unit = child_unit(unit, delta, n, RegionKind::OuterRing, 0);
  }
}

TEST_CASE("unit_children composed to depth 4: exact extreme sides") {
  const Rat delta(2, 7);
  const std::vector<long> branching = {7, 7, 7};
  std::vector<Unit> frontier = {root_unit()};
  for (long n : branching) {
    std::vector<Unit> next;
    next.reserve(frontier.size() * static_cast<size_t>(2 * ring_count(n)));
    for (const auto& u : frontier)
      for (auto&& c : unit_children(u, delta, n)) next.push_back(c);
    frontier = std::move(next);
  }
  REQUIRE(frontier.size() == 48u * 48u * 48u);
  Rat min_side = frontier.front().outer.side, max_side = min_side;
  for (const auto& u : frontier) {
    min_side = std::min(min_side, u.outer.side);
    max_side = std::max(max_side, u.outer.side);
  }
  CHECK(max_side == Rat(1, 343));
  CHECK(min_side == delta * delta * delta / 343);
}

TEST_CASE("UnitAddress resolves and validates") {
  ConstructionParams p = params(Rat(1, 3), Rat(3, 5), {7, 14});
  UnitAddress addr;
  addr.path = {{RegionKind::OuterRing, 0}, {RegionKind::InnerRing, 13}};
  const Unit u = addr.resolve(p);
  CHECK(u.birth == 3);
  CHECK(u.outer.side == Rat(1, 7) * Rat(1, 3) / 14);

  UnitAddress bad;
  bad.path = {{RegionKind::OuterRing, 24}};  // 4n-4 = 24 means max index 23
  CHECK_THROWS_AS(bad.resolve(p), std::invalid_argument);
  UnitAddress deep;
  deep.path = {{RegionKind::OuterRing, 0}, {RegionKind::OuterRing, 0}, {RegionKind::OuterRing, 0}};
  CHECK_THROWS_AS(deep.resolve(p), std::invalid_argument);
}
