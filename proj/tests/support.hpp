#pragma once

// Independent reference implementations used as test oracles.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <vector>

#include "glvsos/glv_model.hpp"
#include "glvsos/invariant_sets.hpp"
#include "glvsos/sizos_synthesis.hpp"

namespace testsupport {

using glvsos::Vector;

// r_i N_i (1 - sum_j a_ij N_j), written out with plain loops.
inline Vector scalar_glv(const Vector& r, const std::vector<Vector>& a,
                         const Vector& x) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double s = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j) s -= a[i][j] * x[j];
    out[i] = r[i] * x[i] * s;
  }
  return out;
}

// Visits every assignment of the free coordinates to {l_j, u_j} with
// coordinate `pinned` fixed at `value`.
template <class F>
void for_face_vertices(const glvsos::RectangularSet& rect, std::size_t pinned,
                       double value, F&& visit) {
  const std::size_t n = rect.dimension();
  Vector x(n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    if (mask & (std::size_t{1} << pinned)) continue;
    for (std::size_t j = 0; j < n; ++j)
      x[j] = (mask >> j) & 1U ? rect.upper()[j] : rect.lower()[j];
    x[pinned] = value;
    visit(x);
  }
}

struct FaceOracle {
  bool decision = true;
  // Largest outward rate over all faces and vertices.
  double worst_rate = -std::numeric_limits<double>::infinity();
};

// Brute-force face check. Face rates are affine in every free coordinate,
// so their maxima sit at face vertices.
inline FaceOracle brute_force_sos(const glvsos::GlvParameters& p,
                                  const glvsos::RectangularSet& rect) {
  const auto r = p.growth_rates();
  const auto a = p.competition_rows();
  FaceOracle out;
  for (std::size_t i = 0; i < p.species(); ++i) {
    for (int side = 0; side < 2; ++side) {
      const double v = side ? rect.upper()[i] : rect.lower()[i];
      for_face_vertices(rect, i, v, [&](const Vector& x) {
        const double f = scalar_glv(r, a, x)[i];
        const double rate = side ? f : -f;
        out.worst_rate = std::max(out.worst_rate, rate);
      });
    }
  }
  out.decision = out.worst_rate <= 0.0;
  return out;
}

// Brute-force SIZOS: rate_i depends on its own control only and is affine in
// it, so per face the inner minimum is attained at a box endpoint.
inline FaceOracle brute_force_sizos(const glvsos::GlvParameters& p,
                                    const glvsos::RectangularSet& rect,
                                    const glvsos::ControlBox& box) {
  const auto r = p.growth_rates();
  FaceOracle out;
  for (std::size_t i = 0; i < p.species(); ++i) {
    for (int side = 0; side < 2; ++side) {
      const double v = side ? rect.upper()[i] : rect.lower()[i];
      for_face_vertices(rect, i, v, [&](const Vector& x) {
        double best = std::numeric_limits<double>::infinity();
        for (double c : {box.lower()[i], box.upper()[i]}) {
          auto a = p.competition_rows();
          a[i][i] = c;
          const double f = scalar_glv(r, a, x)[i];
          best = std::min(best, side ? f : -f);
        }
        out.worst_rate = std::max(out.worst_rate, best);
      });
    }
  }
  out.decision = out.worst_rate <= 0.0;
  return out;
}

struct RandomInstance {
  glvsos::GlvParameters params;
  glvsos::RectangularSet rect;
  glvsos::ControlBox box;
};

// Entries in [-2, 2] with |r_i| >= 0.1; rectangles with 0.05 <= l < u <= 5.
// Half of the instances shrink the rectangle and tilt the matrix towards
// the SOS region so both decisions are well represented.
inline RandomInstance random_instance(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  std::uniform_real_distribution<double> mag(0.1, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  const bool tame = coin(rng);
  Vector r(n);
  std::vector<Vector> a(n, Vector(n));
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = (tame || coin(rng) ? 1.0 : -1.0) * mag(rng);
    for (std::size_t j = 0; j < n; ++j)
      a[i][j] = tame ? (i == j ? 0.5 + unit(rng) : 0.3 * coef(rng)) : coef(rng);
  }
  Vector lo(n), hi(n), cl(n), cu(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (tame) {
      lo[j] = 0.05 + 0.5 * unit(rng);
      hi[j] = lo[j] + 0.2 + 2.0 * unit(rng);
    } else {
      const double x = 0.05 + 4.95 * unit(rng), y = 0.05 + 4.95 * unit(rng);
      lo[j] = std::min(x, y);
      hi[j] = std::max(x, y);
      if (hi[j] - lo[j] < 1e-3) hi[j] = std::min(5.0, lo[j] + 0.1);
    }
    const double c1 = 0.05 + 2.0 * unit(rng), c2 = 0.05 + 2.0 * unit(rng);
    cl[j] = std::min(c1, c2);
    cu[j] = std::max(c1, c2);
  }
  return {glvsos::GlvParameters(r, a), glvsos::RectangularSet(lo, hi),
          glvsos::ControlBox(cl, cu)};
}

inline double min_abs(const std::vector<glvsos::Margin>& margins) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& x : margins) m = std::min(m, std::abs(x.value));
  return m;
}

}  // namespace testsupport
