#include "glvsos/sos_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "glv_faces.hpp"

namespace glvsos {

const char* to_string(Method method) {
  switch (method) {
    case Method::closed_form: return "closed_form";
    case Method::face_sampled: return "face_sampled";
    case Method::smooth_sampled: return "smooth_sampled";
    case Method::minimax: return "minimax";
  }
  return "unknown";
}

double Verdict::worst_margin() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& m : margins) worst = std::max(worst, m.value);
  return worst;
}

namespace {

std::string face_margin_id(const GlvParameters& params, std::size_t i,
                           Side side) {
  return std::string(params.growth(i) > 0.0 ? "R+/" : "R-/") +
         std::to_string(i + 1) + "/" + to_string(side);
}

// Strict "a is a better witness than b": larger rate beyond the tie band,
// otherwise smaller (face, side, point) key.
bool better_witness(const OutwardWitness& a, const OutwardWitness& b) {
  if (a.outward_rate > b.outward_rate + kWitnessTieTolerance) return true;
  if (b.outward_rate > a.outward_rate + kWitnessTieTolerance) return false;
  if (a.constraint != b.constraint) return a.constraint < b.constraint;
  const int sa = a.side ? static_cast<int>(*a.side) : 0;
  const int sb = b.side ? static_cast<int>(*b.side) : 0;
  if (sa != sb) return sa < sb;
  return a.point < b.point;
}

}  // namespace

Verdict sos_rect_glv(const GlvParameters& params, const RectangularSet& rect,
                     const Floors& floors) {
  detail::require_dimension(params.species(), rect.dimension(), "rectangle");
  rect.require_population(floors);
  build_index_sets(params);  // rejects r_i == 0

  Verdict v;
  v.method = Method::closed_form;
  v.tolerance = kClosedFormTolerance;
  for (std::size_t i = 0; i < params.species(); ++i) {
    for (Side side : {Side::upper, Side::lower}) {
      const auto ext = detail::glv_face_extreme(params, rect, i, side,
                                                params.competition(i, i));
      v.margins.push_back({face_margin_id(params, i, side), ext.margin});
      if (ext.margin > kClosedFormTolerance * ext.scale) v.decision = false;
    }
  }
  return v;
}

Verdict sos_rect_sampled(const VectorField& field, const RectangularSet& rect,
                         std::size_t resolution, double tol) {
  const BoundaryGrid grid(rect, resolution);
  const std::size_t n = rect.dimension();
  std::vector<double> face_max(2 * n, -std::numeric_limits<double>::infinity());
  std::optional<OutwardWitness> best;
  Vector rate(n);
  Verdict v;
  v.method = Method::face_sampled;
  v.tolerance = tol;

  for (const BoundarySample& s : grid) {
    ++v.samples;
    field(s.point, rate);
    auto check = [&](std::size_t axis, Side side) {
      const double r = face_rate(rate, axis, side);
      const std::size_t f = 2 * axis + (side == Side::upper ? 1 : 0);
      face_max[f] = std::max(face_max[f], r);
      if (r > tol) {
        OutwardWitness w{s.point, axis, side, r};
        if (!best || better_witness(w, *best)) best = std::move(w);
      }
    };
    for (std::size_t axis : s.active.upper) check(axis, Side::upper);
    for (std::size_t axis : s.active.lower) check(axis, Side::lower);
  }
  for (std::size_t f = 0; f < 2 * n; ++f) {
    const Side side = f % 2 == 0 ? Side::lower : Side::upper;
    v.margins.push_back({"face/" + std::to_string(f / 2 + 1) + "/" +
                             to_string(side),
                         face_max[f]});
  }
  v.decision = !best.has_value();
  v.witness = std::move(best);
  return v;
}

Verdict sos_smooth_sampled(const VectorField& field, const SmoothSet& set,
                           std::span<const Vector> boundary_points, double tol,
                           double active_tol) {
  const std::size_t n = set.dimension();
  std::vector<double> k_max(set.size(), -std::numeric_limits<double>::infinity());
  std::vector<bool> seen(set.size(), false);
  std::optional<OutwardWitness> best;
  Vector rate(n), grad(n);
  Verdict v;
  v.method = Method::smooth_sampled;
  v.tolerance = tol;

  for (const Vector& z : boundary_points) {
    if (z.size() != n || !contains(set, z, active_tol)) {
      ++v.skipped;
      continue;
    }
    const ActiveSet active = active_set(set, z, active_tol);
    if (active.indices.empty()) {
      ++v.skipped;
      continue;
    }
    ++v.samples;
    field(z, rate);
    for (std::size_t k : active.indices) {
      set.constraint(k).gradient(z, grad);
      double r = 0.0;
      for (std::size_t i = 0; i < n; ++i) r += grad[i] * rate[i];
      seen[k] = true;
      k_max[k] = std::max(k_max[k], r);
      if (r > tol) {
        OutwardWitness w{z, k, std::nullopt, r};
        if (!best || better_witness(w, *best)) best = std::move(w);
      }
    }
  }
  if (v.samples == 0)
    throw InsufficientSamples("smooth-set oracle: no usable boundary points");
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (seen[k]) v.margins.push_back({"phi/" + std::to_string(k + 1), k_max[k]});
  }
  v.decision = !best.has_value();
  v.witness = std::move(best);
  return v;
}

Verdict may_leonard_sos_condition(double alpha, double beta, double nl,
                                  double nu, const Floors& floors) {
  if (!(alpha >= floors.coefficient) || !(beta >= floors.coefficient))
    throw InvalidArgument("May-Leonard coefficients below epsilon_1");
  if (!(nl >= floors.population) || !(nl > 0.0))
    throw InvalidArgument("population lower bound below epsilon_2");
  if (!(nl < nu) || !std::isfinite(nu))
    throw InvalidArgument("population bounds need nl < nu");

  const double s = alpha + beta;
  Verdict v;
  v.method = Method::closed_form;
  v.tolerance = kClosedFormTolerance;
  v.margins = {
      {"bounds_sum", (1.0 - nu - nl) / nu},
      {"upper_line", s - (1.0 - nl) / nu},
      {"lower_line", (1.0 - nu) / nl - s},
  };
  const double scale = 1.0 + s + 1.0 / nl;
  for (const auto& m : v.margins)
    if (m.value > kClosedFormTolerance * scale) v.decision = false;
  return v;
}

std::optional<OutwardWitness> find_outward_witness(const GlvParameters& params,
                                                   const RectangularSet& rect,
                                                   std::size_t resolution,
                                                   double tol) {
  detail::require_dimension(params.species(), rect.dimension(), "rectangle");
  const Verdict sampled = sos_rect_sampled(as_field(params), rect, resolution, tol);

  std::optional<OutwardWitness> closed;
  for (std::size_t i = 0; i < params.species(); ++i) {
    for (Side side : {Side::lower, Side::upper}) {
      const auto ext = detail::glv_face_extreme(params, rect, i, side,
                                                params.competition(i, i));
      const double r = face_rate(vector_field(params, ext.vertex), i, side);
      if (!(r > tol)) continue;
      OutwardWitness w{ext.vertex, i, side, r};
      if (!closed || better_witness(w, *closed)) closed = std::move(w);
    }
  }
  if (!closed) return sampled.witness;
  if (!sampled.witness) return closed;
  if (sampled.witness->outward_rate > closed->outward_rate + kWitnessTieTolerance)
    return sampled.witness;
  return closed;
}

SimulationSummary verify_sos_by_simulation(const VectorField& field,
                                           const RectangularSet& rect,
                                           double t_end,
                                           const IntegrateOptions& options,
                                           double band) {
  SimulationSummary summary;
  summary.runs = vertex_suite(field, rect, t_end, options, band);
  summary.max_excursion = -std::numeric_limits<double>::infinity();
  for (const auto& run : summary.runs) {
    if (run.trajectory.status != TrajectoryStatus::completed)
      throw NumericalFailure(std::string("vertex trajectory ") +
                             to_string(run.trajectory.status));
    summary.all_contained = summary.all_contained && run.report.contained;
    if (run.report.first_exit) ++summary.exits;
    summary.max_excursion = std::max(summary.max_excursion, run.report.max_excursion);
  }
  return summary;
}

}  // namespace glvsos
