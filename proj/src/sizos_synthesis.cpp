#include "glvsos/sizos_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "glv_faces.hpp"

namespace glvsos {

ControlBox::ControlBox(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty()) throw InvalidArgument("control box needs >= 1 control");
  detail::require_dimension(lower_.size(), upper_.size(), "control bounds");
  detail::require_finite(lower_, "control lower bounds");
  detail::require_finite(upper_, "control upper bounds");
  for (std::size_t l = 0; l < lower_.size(); ++l) {
    if (!(lower_[l] <= upper_[l]))
      throw InvalidArgument("control " + std::to_string(l + 1) +
                            ": lower bound exceeds upper bound");
  }
}

ControlBox ControlBox::uniform(std::size_t p, double lower, double upper) {
  return ControlBox(Vector(p, lower), Vector(p, upper));
}

ForcedGlv::ForcedGlv(GlvParameters base, ControlBox controls)
    : base_(std::move(base)), controls_(std::move(controls)) {
  detail::require_dimension(base_.species(), controls_.size(),
                            "diagonal control box");
  for (std::size_t i = 0; i < controls_.size(); ++i) {
    if (!(controls_.lower()[i] > 0.0))
      throw InvalidArgument("self-competition control " +
                            std::to_string(i + 1) +
                            " needs a positive lower bound");
  }
}

void ForcedGlv::rate(std::span<const double> state,
                     std::span<const double> control,
                     std::span<double> out) const {
  const std::size_t n = species();
  detail::require_dimension(n, state.size(), "state");
  detail::require_dimension(n, control.size(), "control");
  for (std::size_t i = 0; i < n; ++i) {
    double bracket = 1.0 - control[i] * state[i];
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) bracket -= base_.competition(i, j) * state[j];
    out[i] = base_.growth(i) * state[i] * bracket;
  }
}

ControlledField as_controlled_field(const ForcedGlv& forced) {
  return [forced](std::span<const double> x, std::span<const double> u,
                  std::span<double> out) { forced.rate(x, u, out); };
}

Verdict sizos_rect_glv(const ForcedGlv& forced, const RectangularSet& rect,
                       const Floors& floors) {
  const GlvParameters& params = forced.base();
  detail::require_dimension(params.species(), rect.dimension(), "rectangle");
  rect.require_population(floors);
  build_index_sets(params);

  Verdict v;
  v.method = Method::closed_form;
  v.tolerance = kClosedFormTolerance;
  for (std::size_t i = 0; i < params.species(); ++i) {
    for (Side side : {Side::upper, Side::lower}) {
      // sigma * bracket decreases in the control when sigma > 0.
      const double sigma = detail::outward_sign(params, i, side);
      const double u = sigma > 0.0 ? forced.controls().upper()[i]
                                   : forced.controls().lower()[i];
      const auto ext = detail::glv_face_extreme(params, rect, i, side, u);
      v.margins.push_back({std::string(params.growth(i) > 0.0 ? "R+/" : "R-/") +
                               std::to_string(i + 1) + "/" + to_string(side),
                           ext.margin});
      if (ext.margin > kClosedFormTolerance * ext.scale) v.decision = false;
    }
  }
  return v;
}

MayLeonardSizos may_leonard_sizos_condition(double alpha, double beta,
                                            double nl, double nu, double al,
                                            double au, const Floors& floors) {
  if (!(alpha >= floors.coefficient) || !(beta >= floors.coefficient))
    throw InvalidArgument("May-Leonard coefficients below epsilon_1");
  if (!(nl >= floors.population) || !(nl > 0.0))
    throw InvalidArgument("population lower bound below epsilon_2");
  if (!(nl < nu) || !std::isfinite(nu))
    throw InvalidArgument("population bounds need nl < nu");
  if (!(al > 0.0) || !(al <= au) || !std::isfinite(au))
    throw InvalidArgument("control bounds need 0 < al <= au");

  const double s = alpha + beta;
  MayLeonardSizos out;
  out.au_min = (1.0 - s * nl) / nu;
  out.al_max = (1.0 - s * nu) / nl;
  Verdict& v = out.verdict;
  v.method = Method::closed_form;
  v.tolerance = kClosedFormTolerance;
  // Upper face: 0 >= 1 - au nu - s nl.  Lower face: 0 <= 1 - al nl - s nu.
  const double upper = 1.0 - au * nu - s * nl;
  const double lower = -(1.0 - al * nl - s * nu);
  v.margins = {{"upper_face", upper}, {"lower_face", lower}};
  const double upper_scale = 1.0 + std::abs(au * nu) + std::abs(s * nl);
  const double lower_scale = 1.0 + std::abs(al * nl) + std::abs(s * nu);
  v.decision = upper <= kClosedFormTolerance * upper_scale &&
               lower <= kClosedFormTolerance * lower_scale;
  return out;
}

// ---------------------------------------------------------------------------
// Minimax

namespace {

class ControlGrid {
 public:
  ControlGrid(const ControlBox& box, std::size_t resolution) {
    if (resolution < 2)
      throw InvalidArgument("control resolution must be >= 2");
    axes_.resize(box.size());
    for (std::size_t l = 0; l < box.size(); ++l) {
      const double lo = box.lower()[l], hi = box.upper()[l];
      if (lo == hi) {
        axes_[l] = {lo};
        continue;
      }
      for (std::size_t k = 0; k < resolution; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(resolution - 1);
        axes_[l].push_back(k == 0 ? lo : k + 1 == resolution ? hi : lo + t * (hi - lo));
      }
    }
    size_ = 1;
    for (const auto& a : axes_) size_ *= a.size();
  }

  std::size_t size() const { return size_; }

  void decode(std::size_t index, Vector& u) const {
    for (std::size_t l = axes_.size(); l-- > 0;) {
      u[l] = axes_[l][index % axes_[l].size()];
      index /= axes_[l].size();
    }
  }

 private:
  std::vector<Vector> axes_;
  std::size_t size_ = 1;
};

struct InnerValue {
  double value;
  std::size_t constraint;
  std::optional<Side> side;
};

// Shared max-min driver. `inner(state, active, u)` returns the max over
// active constraints for one control. Every state is first scored on the box
// corners, an upper bound on its grid minimum since corners are grid points;
// states are then scanned in decreasing bound order and the scan stops once
// no bound can beat the incumbent. Ties resolve to the earliest state in
// traversal order, so the result matches a plain sequential scan.
template <typename States, typename Inner>
MinimaxResult run_minimax(const States& states, const ControlBox& controls,
                          std::size_t control_resolution, Inner&& inner) {
  const ControlGrid grid(controls, control_resolution);
  const ControlGrid corners(controls, 2);
  Vector u(controls.size());

  struct Candidate {
    Vector state;
    ActiveSet active;
    double bound;
    std::size_t order;
  };
  std::vector<Candidate> cands;
  states([&](const Vector& state, const ActiveSet& active) {
    double bound = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < corners.size(); ++c) {
      corners.decode(c, u);
      bound = std::min(bound, inner(state, active, u).value);
    }
    cands.push_back({state, active, bound, cands.size()});
  });
  if (cands.empty()) throw InsufficientSamples("minimax: no usable boundary points");
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& a, const Candidate& b) { return a.bound > b.bound; });

  MinimaxResult best;
  best.margin = -std::numeric_limits<double>::infinity();
  best.states_scanned = cands.size();
  std::size_t best_order = 0;
  bool have = false;
  // true when `value` at traversal position `order` does not beat the incumbent
  auto beaten = [&](double value, std::size_t order) {
    return have && (value < best.margin || (value == best.margin && order > best_order));
  };
  std::size_t warm = 0;
  for (const Candidate& c : cands) {
    if (beaten(c.bound, c.order)) {
      if (c.bound < best.margin) break;
      continue;
    }
    double state_min = std::numeric_limits<double>::infinity();
    std::size_t arg = warm;
    InnerValue arg_value{state_min, 0, std::nullopt};
    bool pruned = false;
    for (std::size_t step = 0; step < grid.size(); ++step) {
      const std::size_t idx = step == 0 ? warm : (step <= warm ? step - 1 : step);
      grid.decode(idx, u);
      const InnerValue iv = inner(c.state, c.active, u);
      if (iv.value < state_min) {
        state_min = iv.value;
        arg = idx;
        arg_value = iv;
      }
      if (beaten(state_min, c.order)) {
        pruned = true;
        break;
      }
    }
    warm = arg;
    if (pruned) continue;
    have = true;
    best.margin = state_min;
    best_order = c.order;
    best.state = c.state;
    best.control.resize(controls.size());
    grid.decode(arg, best.control);
    best.constraint = arg_value.constraint;
    best.side = arg_value.side;
  }
  return best;
}

}  // namespace

MinimaxResult minimax_margin(const ControlledField& field,
                             const RectangularSet& rect,
                             const ControlBox& controls,
                             std::size_t state_resolution,
                             std::size_t control_resolution) {
  const BoundaryGrid grid(rect, state_resolution);
  Vector rate(rect.dimension());
  auto states = [&](auto&& visit) {
    for (const BoundarySample& s : grid) visit(s.point, s.active);
  };
  auto inner = [&](const Vector& x, const ActiveSet& active, const Vector& u) {
    field(x, u, rate);
    InnerValue iv{-std::numeric_limits<double>::infinity(), 0, std::nullopt};
    for (std::size_t axis : active.upper) {
      const double r = rate[axis];
      if (r > iv.value) iv = {r, axis, Side::upper};
    }
    for (std::size_t axis : active.lower) {
      const double r = -rate[axis];
      if (r > iv.value) iv = {r, axis, Side::lower};
    }
    return iv;
  };
  return run_minimax(states, controls, control_resolution, inner);
}

MinimaxResult minimax_margin(const ControlledField& field, const SmoothSet& set,
                             std::span<const Vector> boundary_points,
                             const ControlBox& controls,
                             std::size_t control_resolution,
                             double active_tol) {
  const std::size_t n = set.dimension();
  Vector rate(n), grad(n);
  auto states = [&](auto&& visit) {
    for (const Vector& z : boundary_points) {
      if (z.size() != n || !contains(set, z, active_tol)) continue;
      const ActiveSet active = active_set(set, z, active_tol);
      if (active.indices.empty()) continue;
      visit(z, active);
    }
  };
  auto inner = [&](const Vector& z, const ActiveSet& active, const Vector& u) {
    field(z, u, rate);
    InnerValue iv{-std::numeric_limits<double>::infinity(), 0, std::nullopt};
    for (std::size_t k : active.indices) {
      set.constraint(k).gradient(z, grad);
      double r = 0.0;
      for (std::size_t i = 0; i < n; ++i) r += grad[i] * rate[i];
      if (r > iv.value) iv = {r, k, std::nullopt};
    }
    return iv;
  };
  return run_minimax(states, controls, control_resolution, inner);
}

// ---------------------------------------------------------------------------
// Ramp feedback

double RampFeedback::operator()(double n) const {
  const double ramp_low = std::max(0.0, n - b0) - std::max(0.0, n - b1);
  const double ramp_high = std::max(0.0, n - b2) - std::max(0.0, n - b3);
  const double v = at_lower + lower_slope() * ramp_low + upper_slope() * ramp_high;
  const double lo = std::min({at_lower, nominal, at_upper});
  const double hi = std::max({at_lower, nominal, at_upper});
  return std::clamp(v, lo, hi);
}

namespace {

std::vector<RampFeedback> build_ramps(const RectangularSet& rect,
                                      const ControlBox& controls,
                                      const RampOptions& options,
                                      const std::vector<bool>& inverted) {
  detail::require_dimension(rect.dimension(), controls.size(), "control box");
  if (!(options.band_width > 0.0) || !std::isfinite(options.band_width))
    throw InvalidArgument("ramp band width must be positive");
  if (!std::isfinite(options.nominal))
    throw InvalidArgument("ramp nominal value must be finite");
  std::vector<RampFeedback> out;
  for (std::size_t i = 0; i < controls.size(); ++i) {
    const double l = rect.lower()[i], u = rect.upper()[i];
    if (2.0 * options.band_width > u - l) {
      throw InvalidArgument("ramp bands overlap on axis " + std::to_string(i + 1) +
                            ": 2 * band_width exceeds the set width");
    }
    RampFeedback r;
    r.control_index = i;
    r.coordinate = i;
    r.b0 = l;
    r.b1 = l + options.band_width;
    r.b2 = u - options.band_width;
    r.b3 = u;
    const double lo = controls.lower()[i], hi = controls.upper()[i];
    r.nominal = std::clamp(options.nominal, lo, hi);
    r.at_lower = inverted[i] ? hi : lo;
    r.at_upper = inverted[i] ? lo : hi;
    out.push_back(r);
  }
  return out;
}

}  // namespace

std::vector<RampFeedback> synthesize_ramp_feedback(const RectangularSet& rect,
                                                   const ControlBox& controls,
                                                   const RampOptions& options) {
  return build_ramps(rect, controls, options,
                     std::vector<bool>(controls.size(), false));
}

std::vector<RampFeedback> synthesize_ramp_feedback(const ForcedGlv& forced,
                                                   const RectangularSet& rect,
                                                   const RampOptions& options,
                                                   const Floors& floors) {
  const Verdict v = sizos_rect_glv(forced, rect, floors);
  if (!v.decision)
    throw InvalidArgument(
        "ramp synthesis: the control box does not satisfy the "
        "sustainizability conditions over this set");
  std::vector<bool> inverted(forced.species());
  for (std::size_t i = 0; i < forced.species(); ++i)
    inverted[i] = forced.base().growth(i) < 0.0;
  return build_ramps(rect, forced.controls(), options, inverted);
}

VectorField close_loop(const ForcedGlv& forced,
                       std::vector<RampFeedback> feedback) {
  const std::size_t n = forced.species();
  if (feedback.size() != n)
    throw InvalidArgument("close_loop: expected " + std::to_string(n) +
                          " feedback laws, got " +
                          std::to_string(feedback.size()));
  std::vector<bool> seen(n, false);
  for (const auto& f : feedback) {
    if (f.control_index >= n || f.coordinate >= n || seen[f.control_index])
      throw InvalidArgument("close_loop: feedback slots do not match controls");
    seen[f.control_index] = true;
  }
  return [forced, feedback = std::move(feedback)](std::span<const double> x,
                                                  std::span<double> out) {
    double u[16];
    Vector heap;
    std::span<double> control;
    if (feedback.size() <= 16) {
      control = std::span<double>(u, feedback.size());
    } else {
      heap.resize(feedback.size());
      control = heap;
    }
    for (const auto& f : feedback) control[f.control_index] = f(x[f.coordinate]);
    forced.rate(x, control, out);
  };
}

}  // namespace glvsos
