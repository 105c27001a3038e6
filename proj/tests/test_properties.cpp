#include <doctest.h>

#include "equivalence.hpp"
#include "glvsos/ode_sim.hpp"

using namespace glvsos;

TEST_SUITE("properties") {

TEST_CASE("closed forms agree with the sampling oracles") {
  const auto s = testsupport::run_equivalence(600, 2024);
  for (const auto& f : s.failures) MESSAGE(f);
  CHECK(s.disagreements == 0);
  CHECK(s.sos_compared >= 500);
  CHECK(s.sizos_compared >= 500);
  // both outcomes must be exercised
  CHECK(s.sos_true > 50);
  CHECK(s.sos_compared - s.sos_true > 50);
  CHECK(s.sizos_true > 50);
  CHECK(s.sizos_compared - s.sizos_true > 50);
}

TEST_CASE("degenerate control box reduces SIZOS to SOS") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 400; ++k) {
    const auto inst = testsupport::random_instance(rng, 1 + k % 4);
    const std::size_t n = inst.params.species();
    Vector d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = inst.params.competition(i, i);
    bool positive = true;
    for (double v : d) positive = positive && v > 0.0;
    if (!positive) continue;
    const ForcedGlv forced(inst.params, ControlBox(d, d));
    const Verdict a = sizos_rect_glv(forced, inst.rect);
    const Verdict b = sos_rect_glv(inst.params, inst.rect);
    CHECK(a.decision == b.decision);
    REQUIRE(a.margins.size() == b.margins.size());
    for (std::size_t m = 0; m < a.margins.size(); ++m)
      CHECK(std::abs(a.margins[m].value - b.margins[m].value) <=
            1e-12 * (1.0 + std::abs(b.margins[m].value)));
  }
}

TEST_CASE("widening the control box never breaks SIZOS") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 300; ++k) {
    const auto inst = testsupport::random_instance(rng, 1 + k % 4);
    const ForcedGlv narrow(inst.params, inst.box);
    if (!sizos_rect_glv(narrow, inst.rect).decision) continue;
    Vector lo = inst.box.lower(), hi = inst.box.upper();
    for (std::size_t i = 0; i < lo.size(); ++i) {
      lo[i] *= 0.9;
      hi[i] *= 1.1;
    }
    CHECK(sizos_rect_glv(ForcedGlv(inst.params, ControlBox(lo, hi)), inst.rect).decision);
  }
}

TEST_CASE("synthesized feedback certifies the closed loop") {
  std::mt19937_64 rng(314);
  int certified = 0;
  for (int k = 0; k < 400 && certified < 40; ++k) {
    const auto inst = testsupport::random_instance(rng, 1 + k % 4);
    const ForcedGlv forced(inst.params, inst.box);
    if (!sizos_rect_glv(forced, inst.rect).decision) continue;
    RampOptions o;
    double min_width = INFINITY;
    for (std::size_t i = 0; i < inst.rect.dimension(); ++i)
      min_width = std::min(min_width, inst.rect.upper()[i] - inst.rect.lower()[i]);
    o.band_width = 0.01 * min_width;
    const auto ramps = synthesize_ramp_feedback(forced, inst.rect, o);
    for (const auto& ramp : ramps) {
      const std::size_t c = ramp.control_index;
      for (double v : {ramp.at_lower, ramp.nominal, ramp.at_upper}) {
        CHECK(v >= inst.box.lower()[c]);
        CHECK(v <= inst.box.upper()[c]);
      }
    }
    const VectorField loop = close_loop(forced, ramps);
    CHECK(sos_rect_sampled(loop, inst.rect, 9).decision);
    ++certified;
  }
  CHECK(certified >= 20);
}

TEST_CASE("rectangle and smooth representations agree") {
  std::mt19937_64 rng(77);
  for (int k = 0; k < 200; ++k) {
    const auto inst = testsupport::random_instance(rng, 1 + k % 3);
    const VectorField f = as_field(inst.params);
    const BoundaryGrid grid(inst.rect, 7);
    std::vector<Vector> pts;
    for (const auto& s : grid) pts.push_back(s.point);
    const Verdict a = sos_rect_sampled(f, inst.rect, 7);
    const Verdict b = sos_smooth_sampled(f, SmoothSet::from_rectangle(inst.rect), pts);
    CHECK(a.decision == b.decision);
    CHECK(b.skipped == 0);
  }
}

TEST_CASE("certified rectangles contain their vertex trajectories") {
  std::mt19937_64 rng(8);
  int checked = 0;
  for (int k = 0; k < 200 && checked < 10; ++k) {
    const auto inst = testsupport::random_instance(rng, 2 + k % 2);
    const Verdict v = sos_rect_glv(inst.params, inst.rect);
    if (!v.decision || testsupport::min_abs(v.margins) < 1e-3) continue;
    const auto sim = verify_sos_by_simulation(as_field(inst.params), inst.rect, 20.0);
    CHECK(sim.all_contained);
    ++checked;
  }
  CHECK(checked >= 5);
}

}
