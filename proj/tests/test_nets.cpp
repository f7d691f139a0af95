#include "mcm/nets.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace mcm;
using namespace mcm::testsupport;

namespace {

ConstructionParams ratio_params() {
  // moderate contrast so both regions carry enough points for ratio tests
  ConstructionParams p;
  p.delta = Rat(1, 3);
  p.gamma = Rat(3, 10);
  p.depth = 1;
  return p;
}

}  // namespace

TEST_CASE("generate_net: constant density yields the scaled integer lattice") {
  const DensitySpec flat = constant_spec();
  const long k = 24;
  const Net net = generate_net(flat, 1, k);
  // t_max = 1 and the alignment modulus is 3, so the grid lands on m = k
  CHECK(net.grid_m == k);
  CHECK(static_cast<long>(net.points.size()) == k * k);
  CHECK(net.separation == doctest::Approx(1.0 / k).epsilon(1e-12));
  CHECK(net.covering <= (1.0 / k) * (std::sqrt(0.5) + 0.2));
  CHECK(net.covering >= (1.0 / k) * 0.5);
  CHECK_THROWS_AS(generate_net(flat, 1, 4), std::invalid_argument);
}

TEST_CASE("generate_net: point count tracks total mass k^2") {
  const DensitySpec spec = make_density_spec(ratio_params());
  for (long k : {16L, 32L, 64L}) {
    const Net net = generate_net(spec, 1, k);
    // serpentine diffusion conserves mass up to the running carry
    CHECK(std::llabs(static_cast<long long>(net.points.size()) - k * k) <= 1);
    // separation by construction
    CHECK(net.separation >= (1.0 / static_cast<double>(net.grid_m)) * (1 - 1e-12));
  }
}

TEST_CASE("generate_net: core versus annulus point densities track t_1/s_1") {
  const DensitySpec spec = make_density_spec(ratio_params());
  const Net net = generate_net(spec, 1, 64);
  const Square core = root_unit().inner(spec.params.delta);
  const double core_area = to_double(core.area());
  const double lo_x = to_double(core.rect().x0), hi_x = to_double(core.rect().x1);
  const double lo_y = to_double(core.rect().y0), hi_y = to_double(core.rect().y1);
  long inside = 0;
  // cell centers sit half a cell away from the aligned core boundary, so
  // double comparisons are unambiguous here
  for (const auto& p : net.points)
    if (p.x > lo_x && p.x < hi_x && p.y > lo_y && p.y < hi_y) ++inside;
  const double in_density = static_cast<double>(inside) / core_area;
  const double out_density =
      static_cast<double>(static_cast<long>(net.points.size()) - inside) / (1 - core_area);
  const double ratio = in_density / out_density;
  const double expect = to_double(spec.values.t_at(1) / spec.values.s_at(1));
  CHECK(std::fabs(ratio - expect) <= 0.10 * expect);
}

TEST_CASE("generate_net: dyadic subsquare counts track k^2 times the mass") {
  const DensitySpec spec = make_density_spec(ratio_params());
  const long k = 48;
  const Net net = generate_net(spec, 1, k);
  const double m = static_cast<double>(net.grid_m);
  for (int level = 1; level <= 2; ++level) {
    const int g = 1 << level;
    for (int a = 0; a < g; ++a) {
      for (int b = 0; b < g; ++b) {
        const RectR r{rat(a, g), rat(b, g), rat(a + 1, g), rat(b + 1, g)};
        const double expect = to_double(integrate(spec, r, 1)) * static_cast<double>(k * k);
        const double lo_x = static_cast<double>(a) / g, hi_x = static_cast<double>(a + 1) / g;
        const double lo_y = static_cast<double>(b) / g, hi_y = static_cast<double>(b + 1) / g;
        long count = 0;
        for (const auto& p : net.points)
          if (p.x >= lo_x && p.x < hi_x && p.y >= lo_y && p.y < hi_y) ++count;
        // diffusion carry is bounded by the rows crossing the subsquare
        CHECK(std::fabs(static_cast<double>(count) - expect) <= 4 * m / g + 4);
      }
    }
  }
}

TEST_CASE("net_stats: lattice and two-point cluster") {
  std::vector<Vec2d> lattice;
  const int g = 10;
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) lattice.push_back({(i + 0.5) / g, (j + 0.5) / g});
  const NetStats s = net_stats(lattice, 8 * g);
  CHECK(s.r == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(s.R <= 0.1 / std::sqrt(2.0) * 1.001);
  CHECK(s.R >= 0.1 / std::sqrt(2.0) * 0.8);

  const std::vector<Vec2d> pair = {{0.5, 0.5}, {0.5, 0.52}};
  const NetStats sp = net_stats(pair, 64);
  CHECK(sp.r == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(sp.R >= 0.6);  // roughly the distance from a corner
}

TEST_CASE("match_distortion: congruent nets have constant exactly 1") {
  std::vector<Vec2d> a;
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) a.push_back({(i + 0.5) / 12, (j + 0.5) / 12});

  const MatchResult same = match_distortion(a, a);
  CHECK(same.bilipschitz == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(same.total_squared_cost == doctest::Approx(0.0));
  for (size_t i = 0; i < a.size(); ++i) CHECK(same.assignment[i] == static_cast<int>(i));

  std::vector<Vec2d> b = a;
  for (auto& p : b) {
    p.x += 3.0;
    p.y -= 1.5;
  }
  const MatchResult translated = match_distortion(a, b);
  CHECK(translated.bilipschitz == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("match_distortion: errors and subsampling") {
  std::vector<Vec2d> a = {{0, 0}, {1, 0}, {0, 1}};
  std::vector<Vec2d> b = {{0, 0}, {1, 0}};
  CHECK_THROWS_AS(match_distortion(a, b), std::invalid_argument);
  CHECK_THROWS_AS(match_distortion({}, {}), std::invalid_argument);

  // deterministic subsample keeps sizes equal
  std::vector<Vec2d> big_a, big_b;
  for (int i = 0; i < 500; ++i) {
    big_a.push_back({i / 500.0, 0.25});
    big_b.push_back({i / 500.0, 0.75});
  }
  const MatchResult r = match_distortion(big_a, big_b, 100);
  CHECK(r.matched == 100);
  CHECK(r.bilipschitz == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("match_distortion: density net against the uniform lattice exceeds 1") {
  const DensitySpec spec = make_density_spec(ratio_params());
  const Net net = generate_net(spec, 1, 16);
  const Net uniform = generate_net(constant_spec(), 1, 16);
  std::vector<Vec2d> a = net.points, b = uniform.points;
  const size_t n = std::min(a.size(), b.size());
  a.resize(n);
  b.resize(n);
  const MatchResult r = match_distortion(a, b, 400);
  CHECK(r.bilipschitz > 1.0);
}
