#pragma once

// Adaptive Dormand-Prince 5(4) integration of autonomous fields, with
// escape detection and set-containment monitoring.

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "glvsos/common.hpp"
#include "glvsos/invariant_sets.hpp"

namespace glvsos {

struct IntegrateOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  /// 0 selects the starting step automatically.
  double initial_step = 0.0;
  /// Number of uniform output intervals; the grid has output_samples + 1
  /// points including t = 0 and t = t_end.
  std::size_t output_samples = 1000;
  /// Also record the state after every accepted step.
  bool record_steps = false;
  /// Escape is declared once ||x||_inf exceeds this.
  double blowup = 1e6;
  std::size_t max_steps = 50'000'000;
};

enum class TrajectoryStatus { completed, escaped, step_failure };

const char* to_string(TrajectoryStatus status);

/// Field and options a trajectory was produced with; lets the containment
/// monitor re-integrate between samples.
struct TrajectorySource {
  VectorField field;
  IntegrateOptions options;
};

struct Trajectory {
  Vector times;
  std::vector<Vector> states;
  TrajectoryStatus status = TrajectoryStatus::completed;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::shared_ptr<const TrajectorySource> source;

  std::size_t size() const { return times.size(); }
  const Vector& final_state() const { return states.back(); }
};

Trajectory integrate(const VectorField& field, std::span<const double> x0,
                     double t_end, const IntegrateOptions& options = {});

/// State reached after `duration` from `x0`. Throws NumericalFailure if the
/// integrator does not complete.
Vector advance(const VectorField& field, std::span<const double> x0,
               double duration, const IntegrateOptions& options = {});

inline constexpr double kContainmentBand = 1e-6;
inline constexpr double kExitTimeResolution = 1e-6;

struct ExitEvent {
  double time = 0.0;
  std::size_t axis = 0;
  Side side = Side::lower;
};

struct ContainmentReport {
  bool contained = true;
  std::optional<ExitEvent> first_exit;
  /// max over samples of the signed distance outside the set
  /// (negative when the trajectory stays strictly inside).
  double max_excursion = -std::numeric_limits<double>::infinity();
};

/// Signed distance outside the rectangle: max_j max(l_j - x_j, x_j - u_j).
double excursion(const RectangularSet& set, std::span<const double> x);

/// Scans the samples. The first sample whose excursion exceeds `tol` marks
/// an exit; the crossing is then bisected to kExitTimeResolution by
/// re-integrating from the last contained sample (or by linear interpolation
/// when the trajectory carries no source).
ContainmentReport monitor_containment(const Trajectory& traj,
                                      const RectangularSet& set,
                                      double tol = kContainmentBand);

struct VertexRun {
  Vector vertex;
  Trajectory trajectory;
  ContainmentReport report;
};

/// Integrates from every vertex of `rect` (vertex_set order) and monitors
/// containment. Runs trajectories concurrently; output is in vertex order.
std::vector<VertexRun> vertex_suite(const VectorField& field,
                                    const RectangularSet& rect, double t_end,
                                    const IntegrateOptions& options = {},
                                    double band = kContainmentBand);

}  // namespace glvsos
