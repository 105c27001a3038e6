#include <doctest.h>

#include <cmath>

#include "glvsos/region_sweep.hpp"
#include "glvsos/sos_analysis.hpp"

using namespace glvsos;

namespace {

const SweepCell* nearest(const SweepResult& r, double x, double y) {
  const SweepCell* best = nullptr;
  double d = INFINITY;
  for (const auto& c : r.cells) {
    const double e = std::hypot(c.x - x, c.y - y);
    if (e < d) {
      d = e;
      best = &c;
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("region_sweep") {

TEST_CASE("triangle vertices") {
  const auto t = triangle_vertices(0.2, 0.05);
  REQUIRE(t);
  CHECK((*t)[0].x == 0.0);
  CHECK((*t)[0].y == 1.0);
  CHECK((*t)[1].x == 0.0);
  CHECK(std::abs((*t)[1].y - 4.0) <= 1e-12);
  CHECK(std::abs((*t)[2].x - 0.8) <= 1e-12);
  CHECK(std::abs((*t)[2].y - 0.8) <= 1e-12);
  const auto d = triangle_vertices(0.5, 0.5);
  REQUIRE(d);
  CHECK((*d)[1].y == 1.0);
  CHECK((*d)[2].x == 0.5);
  CHECK_FALSE(triangle_vertices(0.8, 1.3));
}

TEST_CASE("triangle vertices sit on the condition boundary") {
  for (auto [a, b] : {std::pair{0.2, 0.05}, std::pair{0.1, 0.1}, std::pair{0.3, 0.6}}) {
    const auto t = *triangle_vertices(a, b);
    for (const auto& v : t) {
      const double nl = std::max(v.x, 1e-9);
      const double nu = v.y;
      if (!(nu > nl)) continue;
      const auto verdict = may_leonard_sos_condition(a, b, nl, nu);
      double closest = INFINITY;
      for (const auto& m : verdict.margins) closest = std::min(closest, std::abs(m.value));
      CHECK(closest <= 1e-8);
    }
  }
}

TEST_CASE("population sweep for (0.2, 0.05)") {
  SweepWindow w{0.01, 2.0, 0.01, 4.0, 201, 201};
  const auto r = sweep_population_bounds(0.2, 0.05, w);
  CHECK_FALSE(r.empty);
  CHECK(r.count_sos() > 0);
  CHECK(r.cells.size() + r.excluded == 201 * 201);
  for (const auto& c : r.cells) CHECK(c.y > c.x);
  REQUIRE(r.boundary.size() == 3);
  CHECK(r.boundary[0].name == "upper_line");
  CHECK_FALSE(r.notes.empty());
  // Exact cell through (0.5, 2.0) by a dedicated window.
  SweepWindow exact{0.5, 0.75, 2.0, 3.25, 2, 2};
  const auto e = sweep_population_bounds(0.2, 0.05, exact);
  CHECK(nearest(e, 0.5, 2.0)->sos);
  CHECK_FALSE(nearest(e, 0.75, 3.25)->sos);
}

TEST_CASE("population sweep for (0.8, 1.3) is empty") {
  const auto r = sweep_population_bounds(0.8, 1.3, {0.01, 2.0, 0.01, 4.0, 201, 201});
  CHECK(r.empty);
  CHECK(r.count_sos() == 0);
  CHECK(r.boundary.empty());
}

TEST_CASE("grid matches the analytic triangle away from its edges") {
  const double a = 0.2, b = 0.05, s = a + b;
  SweepWindow w{0.01, 2.0, 0.01, 4.0, 101, 101};
  const auto r = sweep_population_bounds(a, b, w);
  const double h = std::max((w.x_max - w.x_min) / 100, (w.y_max - w.y_min) / 100);
  for (const auto& c : r.cells) {
    const double up = (1.0 - c.x) / c.y - s;   // >= 0 inside
    const double lo = s - (1.0 - c.y) / c.x;   // >= 0 inside
    if (up > h && lo > h) CHECK(c.sos);
    if (up < -h || lo < -h) CHECK_FALSE(c.sos);
  }
}

TEST_CASE("competition sweep for (0.5, 2.0)") {
  SweepWindow w{1e-9, 1.0, 1e-9, 1.0, 101, 101};
  const auto r = sweep_competition_coeffs(0.5, 2.0, w);
  CHECK_FALSE(r.empty);
  REQUIRE(r.boundary.size() == 4);
  CHECK(r.boundary[0].name == "upper_line");
  const auto& up = r.boundary[0].points;
  CHECK(up[0].x + up[0].y == doctest::Approx(0.25));
  const auto e = sweep_competition_coeffs(0.5, 2.0, {0.2, 0.3, 0.05, 0.1, 2, 2});
  CHECK(nearest(e, 0.2, 0.05)->sos);
  CHECK_FALSE(nearest(e, 0.3, 0.1)->sos);
}

TEST_CASE("competition sweep for (0.75, 3.25)") {
  const auto r = sweep_competition_coeffs(0.75, 3.25, {1e-9, 1.0, 1e-9, 1.0, 201, 201});
  CHECK_FALSE(r.empty);
  for (const auto& c : r.cells)
    if (c.sos) CHECK(c.x + c.y <= 0.25 / 3.25 + 1e-12);
  CHECK(r.count_sos() > 0);
}

TEST_CASE("competition sweep is empty when nl > 1") {
  const auto r = sweep_competition_coeffs(1.2, 3.0, {1e-9, 1.0, 1e-9, 1.0, 51, 51});
  CHECK(r.empty);
  CHECK(r.count_sos() == 0);
}

TEST_CASE("competition mask is symmetric under alpha <-> beta") {
  const SweepWindow w{0.001, 0.4, 0.001, 0.4, 61, 61};
  const auto r = sweep_competition_coeffs(0.4, 1.5, w);
  REQUIRE(r.cells.size() == 61 * 61);
  for (std::size_t j = 0; j < 61; ++j)
    for (std::size_t i = 0; i < 61; ++i)
      CHECK(r.cells[j * 61 + i].sos == r.cells[i * 61 + j].sos);
}

TEST_CASE("sweep argument validation") {
  CHECK_THROWS_AS(sweep_population_bounds(0.0, 0.1, {}), InvalidArgument);
  CHECK_THROWS_AS(sweep_competition_coeffs(0.5, 0.4, {}), InvalidArgument);
  SweepWindow bad;
  bad.nx = 0;
  CHECK_THROWS_AS(sweep_population_bounds(0.1, 0.1, bad), InvalidArgument);
}

}
