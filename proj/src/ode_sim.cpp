#include "glvsos/ode_sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace glvsos {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                 c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0,
                 a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                 a76 = 11.0 / 84.0;
// Difference between the 5th- and 4th-order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                 e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous extension (Hairer & Wanner's contd5).
constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;

// PI step-size controller.
constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;   // largest shrink is 1/5 ...
constexpr double kFacMax = 10.0;  // ... largest growth 10x
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;

double inf_norm(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(),
                     [](double v) { return std::isfinite(v); });
}

class DormandPrince {
 public:
  DormandPrince(const VectorField& field, std::size_t n,
                const IntegrateOptions& opt)
      : field_(field), opt_(opt), n_(n) {
    for (auto* k : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &tmp_,
                    &y_new_, &err_, &r1_, &r2_, &r3_, &r4_, &r5_})
      k->assign(n, 0.0);
  }

  double initial_step(std::span<const double> y0, double t_span) {
    field_(y0, k1_);
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk = opt_.abs_tol + opt_.rel_tol * std::abs(y0[i]);
      dnf += (k1_[i] / sk) * (k1_[i] / sk);
      dny += (y0[i] / sk) * (y0[i] / sk);
    }
    dnf /= static_cast<double>(n_);
    dny /= static_cast<double>(n_);
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
    h = std::min({h, opt_.max_step, t_span});
    for (std::size_t i = 0; i < n_; ++i) tmp_[i] = y0[i] + h * k1_[i];
    field_(tmp_, k2_);
    double der2 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk = opt_.abs_tol + opt_.rel_tol * std::abs(y0[i]);
      der2 += ((k2_[i] - k1_[i]) / sk) * ((k2_[i] - k1_[i]) / sk);
    }
    der2 = std::sqrt(der2 / static_cast<double>(n_)) / h;
    const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3)
                                     : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h, h1, opt_.max_step, t_span});
  }

  /// Trial step of size h from y (k1_ must hold f(y)). Returns the scaled
  /// RMS error estimate, or +inf if the trial produced non-finite values.
  double trial(std::span<const double> y, double h) {
    const std::size_t n = n_;
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * a21 * k1_[i];
    field_(tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
    field_(tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
    field_(tmp_, k4_);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] +
                            a54 * k4_[i]);
    field_(tmp_, k5_);
    for (std::size_t i = 0; i < n; ++i)
      tmp_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] +
                            a64 * k4_[i] + a65 * k5_[i]);
    field_(tmp_, k6_);
    for (std::size_t i = 0; i < n; ++i)
      y_new_[i] = y[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] +
                              a75 * k5_[i] + a76 * k6_[i]);
    field_(y_new_, k7_);
    if (!all_finite(y_new_) || !all_finite(k7_))
      return std::numeric_limits<double>::infinity();
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      err_[i] = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] +
                     e6 * k6_[i] + e7 * k7_[i]);
      const double sk =
          opt_.abs_tol +
          opt_.rel_tol * std::max(std::abs(y[i]), std::abs(y_new_[i]));
      err += (err_[i] / sk) * (err_[i] / sk);
    }
    return std::sqrt(err / static_cast<double>(n));
  }

  /// Prepares dense output for the accepted step [t, t + h].
  void prepare_dense(std::span<const double> y, double h) {
    for (std::size_t i = 0; i < n_; ++i) {
      const double ydiff = y_new_[i] - y[i];
      const double bspl = h * k1_[i] - ydiff;
      r1_[i] = y[i];
      r2_[i] = ydiff;
      r3_[i] = bspl;
      r4_[i] = ydiff - h * k7_[i] - bspl;
      r5_[i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] +
                    d6 * k6_[i] + d7 * k7_[i]);
    }
  }

  Vector dense(double theta) const {
    const double theta1 = 1.0 - theta;
    Vector out(n_);
    for (std::size_t i = 0; i < n_; ++i)
      out[i] = r1_[i] +
               theta * (r2_[i] +
                        theta1 * (r3_[i] + theta * (r4_[i] + theta1 * r5_[i])));
    return out;
  }

  void accept() { std::swap(k1_, k7_); }  // FSAL

  const Vector& y_new() const { return y_new_; }
  Vector& k1() { return k1_; }

 private:
  const VectorField& field_;
  const IntegrateOptions& opt_;
  std::size_t n_;
  Vector k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, y_new_, err_;
  Vector r1_, r2_, r3_, r4_, r5_;
};

}  // namespace

const char* to_string(TrajectoryStatus status) {
  switch (status) {
    case TrajectoryStatus::completed: return "completed";
    case TrajectoryStatus::escaped: return "escaped";
    case TrajectoryStatus::step_failure: return "step_failure";
  }
  return "unknown";
}

Trajectory integrate(const VectorField& field, std::span<const double> x0,
                     double t_end, const IntegrateOptions& options) {
  if (!(t_end > 0.0) || !std::isfinite(t_end))
    throw InvalidArgument("integrate: t_end must be positive and finite");
  if (!(options.abs_tol > 0.0) || !(options.rel_tol > 0.0))
    throw InvalidArgument("integrate: tolerances must be positive");
  if (!(options.max_step > 0.0))
    throw InvalidArgument("integrate: max_step must be positive");
  if (options.output_samples == 0)
    throw InvalidArgument("integrate: output_samples must be >= 1");
  if (x0.empty()) throw InvalidArgument("integrate: empty initial state");
  detail::require_finite(x0, "initial state");

  const std::size_t n = x0.size();
  const std::size_t samples = options.output_samples;
  Trajectory traj;
  traj.source = std::make_shared<TrajectorySource>(TrajectorySource{field, options});
  traj.times.push_back(0.0);
  traj.states.emplace_back(x0.begin(), x0.end());

  if (inf_norm(x0) > options.blowup) {
    traj.status = TrajectoryStatus::escaped;
    return traj;
  }

  DormandPrince dp(field, n, options);
  Vector y(x0.begin(), x0.end());
  double t = 0.0;
  double h = options.initial_step > 0.0
                 ? std::min({options.initial_step, options.max_step, t_end})
                 : dp.initial_step(y, t_end);
  field(y, dp.k1());

  auto grid_time = [&](std::size_t k) {
    return k == samples ? t_end
                        : t_end * static_cast<double>(k) /
                              static_cast<double>(samples);
  };
  std::size_t next_grid = 1;
  const double h_min = 1e-14 * t_end;
  double facold = 1e-4;
  bool last_rejected = false;
  std::size_t steps = 0;

  while (t < t_end) {
    if (++steps > options.max_steps || h < h_min) {
      traj.status = TrajectoryStatus::step_failure;
      return traj;
    }
    bool last = false;
    if (t + h >= t_end || t_end - (t + h) < h_min) {
      h = t_end - t;
      last = true;
    }
    const double err = dp.trial(y, h);
    if (!std::isfinite(err)) {
      ++traj.rejected_steps;
      h *= 0.25;
      last_rejected = true;
      continue;
    }
    const double fac11 = std::pow(err, kExpo);
    double fac = fac11 / std::pow(facold, kBeta);
    fac = std::clamp(fac / kSafety, 1.0 / kFacMax, 1.0 / kFacMin);
    double h_new = h / fac;

    if (err > 1.0) {
      ++traj.rejected_steps;
      h /= std::min(1.0 / kFacMin, fac11 / kSafety);
      last_rejected = true;
      continue;
    }

    // accepted
    ++traj.accepted_steps;
    facold = std::max(err, 1e-4);
    const double t_new = last ? t_end : t + h;
    dp.prepare_dense(y, h);
    while (next_grid <= samples && grid_time(next_grid) <= t_new) {
      const double tg = grid_time(next_grid);
      if (tg > traj.times.back()) {
        traj.times.push_back(tg);
        traj.states.push_back(tg == t_new ? dp.y_new() : dp.dense((tg - t) / h));
      }
      ++next_grid;
    }
    if (options.record_steps && t_new > traj.times.back()) {
      traj.times.push_back(t_new);
      traj.states.push_back(dp.y_new());
    }
    y = dp.y_new();
    t = t_new;
    dp.accept();

    if (inf_norm(y) > options.blowup) {
      if (t > traj.times.back()) {
        traj.times.push_back(t);
        traj.states.push_back(y);
      }
      traj.status = TrajectoryStatus::escaped;
      return traj;
    }

    h_new = std::min(h_new, options.max_step);
    if (last_rejected) h_new = std::min(h_new, h);
    last_rejected = false;
    h = h_new;
  }
  return traj;
}

Vector advance(const VectorField& field, std::span<const double> x0,
               double duration, const IntegrateOptions& options) {
  IntegrateOptions opt = options;
  opt.output_samples = 1;
  opt.record_steps = false;
  const Trajectory traj = integrate(field, x0, duration, opt);
  if (traj.status != TrajectoryStatus::completed)
    throw NumericalFailure(std::string("advance: integration ") +
                           to_string(traj.status));
  return traj.final_state();
}

double excursion(const RectangularSet& set, std::span<const double> x) {
  detail::require_dimension(set.dimension(), x.size(), "state");
  double d = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < x.size(); ++j)
    d = std::max({d, set.lower()[j] - x[j], x[j] - set.upper()[j]});
  return d;
}

namespace {

ExitEvent exit_event_at(const RectangularSet& set, std::span<const double> x,
                        double time) {
  ExitEvent ev;
  ev.time = time;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double below = set.lower()[j] - x[j];
    const double above = x[j] - set.upper()[j];
    if (below > worst) {
      worst = below;
      ev.axis = j;
      ev.side = Side::lower;
    }
    if (above > worst) {
      worst = above;
      ev.axis = j;
      ev.side = Side::upper;
    }
  }
  return ev;
}

}  // namespace

ContainmentReport monitor_containment(const Trajectory& traj,
                                      const RectangularSet& set, double tol) {
  if (traj.times.empty())
    throw InvalidArgument("monitor_containment: empty trajectory");
  ContainmentReport report;
  std::optional<std::size_t> exit_index;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double d = excursion(set, traj.states[k]);
    report.max_excursion = std::max(report.max_excursion, d);
    if (!exit_index && d > tol) exit_index = k;
  }
  if (!exit_index) {
    report.contained = report.max_excursion <= tol;
    return report;
  }
  report.contained = false;
  const std::size_t k = *exit_index;
  if (k == 0) {
    report.first_exit = exit_event_at(set, traj.states[0], traj.times[0]);
    return report;
  }

  double ta = traj.times[k - 1];
  double tb = traj.times[k];
  Vector xa = traj.states[k - 1];
  Vector xb = traj.states[k];
  const Vector x_left = xa;
  const double t_left = ta;
  while (tb - ta > kExitTimeResolution) {
    const double tm = 0.5 * (ta + tb);
    Vector xm;
    if (traj.source) {
      xm = advance(traj.source->field, xa, tm - ta, traj.source->options);
    } else {
      const double w = (tm - t_left) / (traj.times[k] - t_left);
      xm.resize(xa.size());
      for (std::size_t j = 0; j < xa.size(); ++j)
        xm[j] = (1.0 - w) * x_left[j] + w * traj.states[k][j];
    }
    if (excursion(set, xm) > tol) {
      tb = tm;
      xb = std::move(xm);
    } else {
      ta = tm;
      xa = std::move(xm);
    }
  }
  report.first_exit = exit_event_at(set, xb, tb);
  return report;
}

std::vector<VertexRun> vertex_suite(const VectorField& field,
                                    const RectangularSet& rect, double t_end,
                                    const IntegrateOptions& options,
                                    double band) {
  const std::vector<Vector> vertices = vertex_set(rect);
  std::vector<std::future<VertexRun>> jobs;
  jobs.reserve(vertices.size());
  for (const Vector& v : vertices) {
    jobs.push_back(std::async(std::launch::async, [&field, &rect, &options, v,
                                                   t_end, band] {
      VertexRun run;
      run.vertex = v;
      run.trajectory = integrate(field, v, t_end, options);
      run.report = monitor_containment(run.trajectory, rect, band);
      return run;
    }));
  }
  std::vector<VertexRun> runs;
  runs.reserve(jobs.size());
  for (auto& job : jobs) runs.push_back(job.get());
  return runs;
}

}  // namespace glvsos
