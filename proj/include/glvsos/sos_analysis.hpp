#pragma once

// Sustainability over sets: is a set positively invariant under the flow?
//
// Decided in closed form for GLV models over population rectangles (face
// extrema at sign-selected vertices), and by boundary-sampling oracles for
// arbitrary fields over rectangles and smooth inequality sets.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glvsos/common.hpp"
#include "glvsos/glv_model.hpp"
#include "glvsos/invariant_sets.hpp"
#include "glvsos/ode_sim.hpp"

namespace glvsos {

enum class Method { closed_form, face_sampled, smooth_sampled, minimax };

const char* to_string(Method method);

/// One checked inequality. `value <= 0` means satisfied.
struct Margin {
  std::string id;
  double value = 0.0;
};

/// Boundary point where the field leaves the set.
struct OutwardWitness {
  Vector point;
  /// Rectangle: the pinned axis. Smooth set: the constraint index k.
  std::size_t constraint = 0;
  /// Present for rectangle faces.
  std::optional<Side> side;
  /// f_i on an upper face, -f_i on a lower face, or grad(phi_k) . f.
  double outward_rate = 0.0;
};

struct Verdict {
  bool decision = true;
  std::vector<Margin> margins;
  std::optional<OutwardWitness> witness;
  Method method = Method::closed_form;
  /// Margins up to this value still count as satisfied.
  double tolerance = 0.0;
  /// Points scanned by a sampling oracle and points it had to skip.
  std::size_t samples = 0;
  std::size_t skipped = 0;

  double worst_margin() const;
};

inline constexpr double kSampledTolerance = 1e-9;
inline constexpr double kClosedFormTolerance = 1e-12;
inline constexpr double kWitnessTieTolerance = 1e-12;

/// Outward rate of `rate` through face (axis, side): f_i on an upper face,
/// -f_i on a lower one.
inline double face_rate(std::span<const double> rate, std::size_t axis,
                        Side side) {
  return side == Side::upper ? rate[axis] : -rate[axis];
}

/// Closed-form GLV conditions over a population rectangle. For each species
/// the upper- and lower-face brackets 1 - sum_j alpha_ij N_j are pushed to
/// their worst face vertex; margins are reported so that <= 0 is satisfied.
Verdict sos_rect_glv(const GlvParameters& params, const RectangularSet& rect,
                     const Floors& floors = {});

/// Face-sampling oracle: on every boundary_grid point checks f_i <= tol on
/// active upper faces and f_i >= -tol on active lower faces. A "true"
/// verdict only certifies the sampled points.
Verdict sos_rect_sampled(const VectorField& field, const RectangularSet& rect,
                         std::size_t resolution = 41,
                         double tol = kSampledTolerance);

/// Smooth-set oracle: grad(phi_k) . f <= tol for every active k at every
/// supplied point. Points outside the set or with no active constraint are
/// skipped and counted. Throws InsufficientSamples if nothing was usable.
Verdict sos_smooth_sampled(const VectorField& field, const SmoothSet& set,
                           std::span<const Vector> boundary_points,
                           double tol = kSampledTolerance,
                           double active_tol = kActiveTolerance);

/// May-Leonard over the symmetric box [nl, nu]^3:
/// SOS iff (1 - nl)/nu >= alpha + beta >= (1 - nu)/nl.
Verdict may_leonard_sos_condition(double alpha, double beta, double nl,
                                  double nu, const Floors& floors = {});

/// Largest outward face rate of a GLV field on the rectangle boundary, or
/// nothing if none exceeds `tol`. Scans the grid and the closed-form worst
/// vertex of every face; the closed-form witness wins ties.
std::optional<OutwardWitness> find_outward_witness(
    const GlvParameters& params, const RectangularSet& rect,
    std::size_t resolution = 41, double tol = kSampledTolerance);

/// Vertex-trajectory cross-check (not a decision procedure).
struct SimulationSummary {
  bool all_contained = true;
  std::size_t exits = 0;
  double max_excursion = 0.0;
  std::vector<VertexRun> runs;
};

SimulationSummary verify_sos_by_simulation(const VectorField& field,
                                           const RectangularSet& rect,
                                           double t_end,
                                           const IntegrateOptions& options = {},
                                           double band = kContainmentBand);

}  // namespace glvsos
