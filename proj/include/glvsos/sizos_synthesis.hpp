#pragma once

// Sustainizability over sets: existence of an admissible feedback that makes
// a set positively invariant, and synthesis of a saturating ramp feedback on
// the GLV self-competition coefficients.

#include <cstddef>
#include <span>
#include <vector>

#include "glvsos/common.hpp"
#include "glvsos/glv_model.hpp"
#include "glvsos/invariant_sets.hpp"
#include "glvsos/sos_analysis.hpp"

namespace glvsos {

/// Per-control admissible interval [lower_l, upper_l], lower <= upper.
class ControlBox {
 public:
  ControlBox(Vector lower, Vector upper);
  static ControlBox uniform(std::size_t p, double lower, double upper);

  std::size_t size() const { return lower_.size(); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }

 private:
  Vector lower_;
  Vector upper_;
};

/// GLV model whose diagonal alpha_ii are the controls; off-diagonals fixed.
/// The diagonal stored in `base` is ignored by the forced dynamics.
class ForcedGlv {
 public:
  /// Requires one control per species and 0 < lower_i.
  ForcedGlv(GlvParameters base, ControlBox controls);

  const GlvParameters& base() const { return base_; }
  const ControlBox& controls() const { return controls_; }
  std::size_t species() const { return base_.species(); }

  /// r_i N_i (1 - u_i N_i - sum_{j != i} alpha_ij N_j).
  void rate(std::span<const double> state, std::span<const double> control,
            std::span<double> out) const;

 private:
  GlvParameters base_;
  ControlBox controls_;
};

ControlledField as_controlled_field(const ForcedGlv& forced);

/// Closed-form GLV conditions with the diagonal free in the control box:
/// on each face the bracket is evaluated with the control value that pushes
/// it inward (alpha^u on R+ upper / R- lower faces, alpha^l otherwise).
Verdict sizos_rect_glv(const ForcedGlv& forced, const RectangularSet& rect,
                       const Floors& floors = {});

struct MayLeonardSizos {
  Verdict verdict;
  /// Smallest admissible upper control bound: (1 - (alpha+beta) nl) / nu.
  double au_min = 0.0;
  /// Largest admissible lower control bound: (1 - (alpha+beta) nu) / nl.
  double al_max = 0.0;
};

MayLeonardSizos may_leonard_sizos_condition(double alpha, double beta,
                                            double nl, double nu, double al,
                                            double au,
                                            const Floors& floors = {});

struct MinimaxResult {
  /// max over boundary samples of min over controls of max over active
  /// constraints of the outward rate. SIZOS at sample scale iff <= tol.
  double margin = 0.0;
  Vector state;
  Vector control;
  /// Rectangle axis or smooth constraint index achieving the inner max.
  std::size_t constraint = 0;
  std::optional<Side> side;
  std::size_t states_scanned = 0;
};

/// Nested grid evaluation of the max-min-max game value over a rectangle.
/// Controls are searched on `control_resolution` points per axis.
MinimaxResult minimax_margin(const ControlledField& field,
                             const RectangularSet& rect,
                             const ControlBox& controls,
                             std::size_t state_resolution,
                             std::size_t control_resolution);

/// Same over caller-supplied boundary points of a smooth set; points
/// outside the set or with no active constraint are ignored.
MinimaxResult minimax_margin(const ControlledField& field, const SmoothSet& set,
                             std::span<const Vector> boundary_points,
                             const ControlBox& controls,
                             std::size_t control_resolution,
                             double active_tol = kActiveTolerance);

/// Continuous piecewise-linear saturating law on one coordinate:
///
///   value(N) = at_lower + s1 [max(0, N-b0) - max(0, N-b1)]
///                       + s2 [max(0, N-b2) - max(0, N-b3)]
///
/// equal to at_lower for N <= b0, nominal on [b1, b2], at_upper for N >= b3.
struct RampFeedback {
  std::size_t control_index = 0;
  std::size_t coordinate = 0;
  double b0 = 0.0, b1 = 0.0, b2 = 0.0, b3 = 0.0;
  double at_lower = 0.0;
  double nominal = 1.0;
  double at_upper = 0.0;

  double lower_slope() const { return (nominal - at_lower) / (b1 - b0); }
  double upper_slope() const { return (at_upper - nominal) / (b3 - b2); }
  /// Max-difference form, clamped into the range of the three levels.
  double operator()(double n) const;
};

struct RampOptions {
  double nominal = 1.0;
  double band_width = 0.001;
};

/// One ramp per control: at_lower = alpha^l on the lower face, rising to
/// `nominal` across [l, l + band], then to alpha^u across [u - band, u].
/// `nominal` is clamped into each control's box.
std::vector<RampFeedback> synthesize_ramp_feedback(
    const RectangularSet& rect, const ControlBox& controls,
    const RampOptions& options = {});

/// As above, but first requires sizos_rect_glv to hold, and orients each
/// ramp by the sign of r_i (R- species get alpha^u on the lower face and
/// alpha^l on the upper face).
std::vector<RampFeedback> synthesize_ramp_feedback(
    const ForcedGlv& forced, const RectangularSet& rect,
    const RampOptions& options = {}, const Floors& floors = {});

/// g(N) = f(N, u(N)) with u_i = feedback[i](N_i).
VectorField close_loop(const ForcedGlv& forced,
                       std::vector<RampFeedback> feedback);

}  // namespace glvsos
