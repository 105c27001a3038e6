#include <doctest.h>

#include <cmath>
#include <random>

#include "glvsos/sizos_synthesis.hpp"
#include "support.hpp"

using namespace glvsos;

namespace {

const RectangularSet kCase3Rect = RectangularSet::symmetric(3, 0.25, 0.38);

ForcedGlv case3(double al = 0.808, double au = 1.25) {
  return ForcedGlv(may_leonard(0.8, 1.3), ControlBox::uniform(3, al, au));
}

}  // namespace

TEST_SUITE("sizos_synthesis") {

TEST_CASE("control box validation") {
  CHECK_NOTHROW(ControlBox({1.0}, {1.0}));
  CHECK_THROWS_AS(ControlBox({2.0}, {1.0}), InvalidArgument);
  CHECK_THROWS_AS(ControlBox({1.0, 1.0}, {2.0}), InvalidArgument);
  CHECK_THROWS_AS(ForcedGlv(may_leonard(0.2, 0.05), ControlBox::uniform(2, 0.5, 1.0)),
                  InvalidArgument);
  CHECK_THROWS_AS(ForcedGlv(may_leonard(0.2, 0.05), ControlBox::uniform(3, 0.0, 1.0)),
                  InvalidArgument);
}

TEST_CASE("forced field substitutes the diagonal") {
  const auto f = case3();
  Vector out(3);
  const Vector x{0.3, 0.2, 0.35};
  const Vector u{0.9, 1.1, 1.2};
  f.rate(x, u, out);
  auto rows = may_leonard(0.8, 1.3).competition_rows();
  for (std::size_t i = 0; i < 3; ++i) rows[i][i] = u[i];
  const Vector ref = testsupport::scalar_glv({1, 1, 1}, rows, x);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(out[i] - ref[i]) <= 1e-15);
}

TEST_CASE("case 3 box is SIZOS") {
  const auto v = sizos_rect_glv(case3(), kCase3Rect);
  CHECK(v.decision);
  CHECK(v.worst_margin() <= 1e-12);
}

TEST_CASE("degenerate box reduces to the unforced verdict") {
  const auto unit = sizos_rect_glv(case3(1.0, 1.0), kCase3Rect);
  const auto sos = sos_rect_glv(may_leonard(0.8, 1.3), kCase3Rect);
  CHECK_FALSE(unit.decision);
  CHECK(unit.decision == sos.decision);
  REQUIRE(unit.margins.size() == sos.margins.size());
  for (std::size_t k = 0; k < sos.margins.size(); ++k) {
    CHECK(unit.margins[k].id == sos.margins[k].id);
    CHECK(unit.margins[k].value == doctest::Approx(sos.margins[k].value).epsilon(1e-14));
  }
}

TEST_CASE("a lower control bound above 1/nl is never SIZOS") {
  // al * nl > 1 makes the lower-face bracket negative whatever the rest.
  const auto f = ForcedGlv(may_leonard(0.2, 0.05), ControlBox::uniform(3, 2.5, 3.0));
  CHECK_FALSE(sizos_rect_glv(f, RectangularSet::symmetric(3, 0.5, 2.0)).decision);
}

TEST_CASE("May-Leonard SIZOS thresholds for case 3") {
  const auto r = may_leonard_sizos_condition(0.8, 1.3, 0.25, 0.38, 0.808, 1.25);
  CHECK(r.verdict.decision);
  CHECK(r.au_min == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(r.al_max == doctest::Approx(0.808).epsilon(1e-14));
  CHECK(std::round(r.au_min * 1000.0) / 1000.0 == 1.25);
  CHECK(std::round(r.al_max * 1000.0) / 1000.0 == 0.808);
  CHECK_FALSE(may_leonard_sizos_condition(0.8, 1.3, 0.25, 0.38, 1.0, 1.0).verdict.decision);
  CHECK_THROWS_AS(may_leonard_sizos_condition(0.8, 1.3, 0.25, 0.38, 1.3, 1.25), InvalidArgument);
}

TEST_CASE("unit box reduces to the SOS scalar condition") {
  const auto r = may_leonard_sizos_condition(0.2, 0.05, 0.5, 2.0, 1.0, 1.0);
  CHECK(r.verdict.decision);
  CHECK(r.verdict.decision == may_leonard_sos_condition(0.2, 0.05, 0.5, 2.0).decision);
}

TEST_CASE("scalar SIZOS condition equals the closed form") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int trues = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const double a = 0.01 + u(rng), b = 0.01 + u(rng);
    const double nl = 0.05 + 0.6 * u(rng), nu = nl + 0.01 + 1.0 * u(rng);
    const double c1 = 0.05 + 2.0 * u(rng), c2 = 0.05 + 2.0 * u(rng);
    const double al = std::min(c1, c2), au = std::max(c1, c2);
    const auto scalar = may_leonard_sizos_condition(a, b, nl, nu, al, au);
    const auto closed = sizos_rect_glv(
        ForcedGlv(may_leonard(a, b), ControlBox::uniform(3, al, au)),
        RectangularSet::symmetric(3, nl, nu));
    CHECK(scalar.verdict.decision == closed.decision);
    trues += closed.decision;
  }
  CHECK(trues > 50);
}

TEST_CASE("threshold monotonicity in nu") {
  for (double s : {0.3, 1.0, 2.1}) {
    for (double nl : {0.05, 0.25, 0.5}) {
      double prev_au = INFINITY, prev_al = INFINITY;
      for (int k = 1; k <= 50; ++k) {
        const double nu = nl + 0.02 * k;
        const auto r = may_leonard_sizos_condition(s / 2, s / 2, nl, nu, 0.1, 0.2);
        if (1.0 - s * nl > 0.0) CHECK(r.au_min < prev_au);
        CHECK(r.al_max < prev_al);
        prev_au = r.au_min;
        prev_al = r.al_max;
      }
    }
  }
}

TEST_CASE("minimax on case 3 agrees with the closed form") {
  const auto f = case3();
  const auto m = minimax_margin(as_controlled_field(f), kCase3Rect, f.controls(), 21, 21);
  CHECK(m.margin <= kSampledTolerance);
  CHECK(m.states_scanned == 6 * 21 * 21);
}

TEST_CASE("minimax on case 2 with the unit box is positive") {
  const auto f = case3(1.0, 1.0);
  const auto m = minimax_margin(as_controlled_field(f), kCase3Rect, f.controls(), 21, 21);
  CHECK(m.margin > kSampledTolerance);
  REQUIRE(m.side);
  const auto sos = sos_rect_sampled(as_field(may_leonard(0.8, 1.3)), kCase3Rect, 21);
  REQUIRE(sos.witness);
  CHECK(m.margin == doctest::Approx(sos.witness->outward_rate).epsilon(1e-12));
  const double rate = face_rate(vector_field(may_leonard(0.8, 1.3), m.state), m.constraint, *m.side);
  CHECK(rate == doctest::Approx(m.margin).epsilon(1e-12));
}

TEST_CASE("minimax of a constant inward field") {
  const auto rect = RectangularSet::symmetric(2, 0.0, 1.0);
  const ControlledField inward = [](std::span<const double> x, std::span<const double>,
                                    std::span<double> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] >= 1.0 ? -1.0 : 1.0;
  };
  const auto m = minimax_margin(inward, rect, ControlBox::uniform(2, 0.0, 1.0), 5, 3);
  CHECK(m.margin == -1.0);
}

TEST_CASE("minimax over smooth sets matches the rectangle version") {
  const auto f = case3();
  const SmoothSet s = SmoothSet::from_rectangle(kCase3Rect);
  std::vector<Vector> pts;
  for (const auto& b : BoundaryGrid(kCase3Rect, 9)) pts.push_back(b.point);
  const auto a = minimax_margin(as_controlled_field(f), kCase3Rect, f.controls(), 9, 9);
  const auto b = minimax_margin(as_controlled_field(f), s, pts, f.controls(), 9);
  CHECK(a.margin == doctest::Approx(b.margin).epsilon(1e-12));
  const std::vector<Vector> outside{{1.0, 1.0, 1.0}};
  CHECK_THROWS_AS(minimax_margin(as_controlled_field(f), s, outside, f.controls(), 9),
                  InsufficientSamples);
}

TEST_CASE("ramp feedback for case 3") {
  const auto ramps = synthesize_ramp_feedback(case3(), kCase3Rect);
  REQUIRE(ramps.size() == 3);
  const auto& r = ramps[0];
  CHECK(r.b0 == 0.25);
  CHECK(r.b1 == doctest::Approx(0.251).epsilon(1e-14));
  CHECK(r.b2 == doctest::Approx(0.379).epsilon(1e-14));
  CHECK(r.b3 == 0.38);
  CHECK(r.lower_slope() == doctest::Approx(192.0).epsilon(1e-9));
  CHECK(r.upper_slope() == doctest::Approx(250.0).epsilon(1e-9));
  CHECK(r(0.25) == doctest::Approx(0.808).epsilon(1e-14));
  CHECK(r(0.2) == doctest::Approx(0.808).epsilon(1e-14));
  CHECK(r(0.30) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r(0.38) == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(r(0.5) == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(r(0.2505) == doctest::Approx(0.904).epsilon(1e-9));
  // Hand-evaluated piecewise form.
  CHECK(std::abs(r(0.2505) - (0.808 + 192.0 * 0.0005)) <= 1e-9);
}

TEST_CASE("degenerate box gives constant feedback") {
  const auto ramps = synthesize_ramp_feedback(kCase3Rect, ControlBox::uniform(3, 1.0, 1.0));
  for (const auto& r : ramps) {
    CHECK(r.lower_slope() == 0.0);
    CHECK(r.upper_slope() == 0.0);
    for (double n : {0.0, 0.25, 0.3, 0.38, 1.0}) CHECK(r(n) == 1.0);
  }
}

TEST_CASE("ramp synthesis preconditions") {
  RampOptions wide;
  wide.band_width = 0.07;
  CHECK_THROWS_AS(synthesize_ramp_feedback(case3(), kCase3Rect, wide), InvalidArgument);
  RampOptions zero;
  zero.band_width = 0.0;
  CHECK_THROWS_AS(synthesize_ramp_feedback(case3(), kCase3Rect, zero), InvalidArgument);
  CHECK_THROWS_AS(synthesize_ramp_feedback(case3(1.0, 1.0), kCase3Rect), InvalidArgument);
  RampOptions high;
  high.nominal = 3.0;
  const auto ramps = synthesize_ramp_feedback(case3(), kCase3Rect, high);
  CHECK(ramps[0].nominal == 1.25);
}

TEST_CASE("feedback admissibility and continuity") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double l = 0.05 + u(rng), w = 0.01 + u(rng);
    const double c1 = 0.1 + u(rng), c2 = 0.1 + u(rng);
    const double al = std::min(c1, c2), au = std::max(c1, c2);
    RampOptions o;
    o.band_width = w * (0.01 + 0.49 * u(rng));
    o.nominal = al + (au - al) * u(rng);
    const auto ramps = synthesize_ramp_feedback(RectangularSet({l}, {l + w}),
                                                ControlBox({al}, {au}), o);
    const auto& r = ramps[0];
    for (int k = 0; k <= 400; ++k) {
      const double n = l - 0.1 * w + 1.2 * w * k / 400.0;
      CHECK(r(n) >= al);
      CHECK(r(n) <= au);
    }
    for (double b : {r.b0, r.b1, r.b2, r.b3}) {
      const double h = 1e-13 * std::max(1.0, b);
      const double slope = std::abs(r.lower_slope()) + std::abs(r.upper_slope());
      CHECK(std::abs(r(b - h) - r(b + h)) <= 2.0 * h * slope + 1e-12);
    }
  }
}

TEST_CASE("closed loop at the coexistence point and at the lower vertex") {
  const auto f = case3();
  const auto g = close_loop(f, synthesize_ramp_feedback(f, kCase3Rect));
  const Vector c = may_leonard_coexistence(0.8, 1.3);
  for (double x : evaluate(g, c)) CHECK(std::abs(x) <= 1e-15);
  const Vector v = evaluate(g, Vector{0.25, 0.25, 0.25});
  for (double x : v) {
    CHECK(x == doctest::Approx(0.06825).epsilon(1e-12));
    CHECK(x > 0.0);
  }
}

TEST_CASE("constant unit feedback recovers the unforced field") {
  const auto f = case3();
  RampOptions o;
  o.nominal = 1.0;
  auto ramps = synthesize_ramp_feedback(kCase3Rect, ControlBox::uniform(3, 1.0, 1.0), o);
  const auto g = close_loop(f, ramps);
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x{u(rng), u(rng), u(rng)};
    const Vector a = evaluate(g, x);
    const Vector b = vector_field(may_leonard(0.8, 1.3), x);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-15);
  }
}

TEST_CASE("close_loop rejects a feedback count mismatch") {
  const auto f = case3();
  auto ramps = synthesize_ramp_feedback(f, kCase3Rect);
  ramps.pop_back();
  CHECK_THROWS_AS(close_loop(f, ramps), InvalidArgument);
}

TEST_CASE("closed-loop certificate on the case 3 law") {
  const auto f = case3();
  const auto g = close_loop(f, synthesize_ramp_feedback(f, kCase3Rect));
  CHECK(sos_rect_sampled(g, kCase3Rect, 41).decision);
}

}
