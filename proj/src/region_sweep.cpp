#include "glvsos/region_sweep.hpp"

#include <algorithm>
#include <cmath>

#include "glvsos/sos_analysis.hpp"

namespace glvsos {

std::optional<std::array<Point2, 3>> triangle_vertices(double alpha,
                                                       double beta) {
  const double s = alpha + beta;
  if (s > 1.0) return std::nullopt;
  const double c = 1.0 / (1.0 + s);
  return std::array<Point2, 3>{Point2{0.0, 1.0}, Point2{0.0, 1.0 / s},
                               Point2{c, c}};
}

double SweepWindow::x(std::size_t i) const {
  if (nx <= 1) return x_min;
  if (i + 1 == nx) return x_max;
  return x_min + (x_max - x_min) * static_cast<double>(i) /
                     static_cast<double>(nx - 1);
}

double SweepWindow::y(std::size_t j) const {
  if (ny <= 1) return y_min;
  if (j + 1 == ny) return y_max;
  return y_min + (y_max - y_min) * static_cast<double>(j) /
                     static_cast<double>(ny - 1);
}

std::size_t SweepResult::count_sos() const {
  return static_cast<std::size_t>(std::count_if(
      cells.begin(), cells.end(), [](const SweepCell& c) { return c.sos; }));
}

namespace {

void validate(const SweepWindow& w) {
  if (w.nx == 0 || w.ny == 0)
    throw InvalidArgument("sweep window needs at least one point per axis");
  if (!(w.x_min <= w.x_max) || !(w.y_min <= w.y_max))
    throw InvalidArgument("sweep window bounds are inverted");
}

}  // namespace

SweepResult sweep_population_bounds(double alpha, double beta,
                                    const SweepWindow& window,
                                    const Floors& floors) {
  validate(window);
  if (!(alpha >= floors.coefficient) || !(beta >= floors.coefficient))
    throw InvalidArgument("May-Leonard coefficients below epsilon_1");

  SweepResult out;
  out.cells.reserve(window.nx * window.ny);
  for (std::size_t j = 0; j < window.ny; ++j) {
    const double nu = window.y(j);
    for (std::size_t i = 0; i < window.nx; ++i) {
      const double nl = window.x(i);
      if (!(nl >= floors.population && nl > 0.0) || !(nu > nl)) {
        ++out.excluded;
        continue;
      }
      const bool sos =
          may_leonard_sos_condition(alpha, beta, nl, nu, floors).decision;
      out.cells.push_back({nl, nu, sos});
    }
  }

  const auto tri = triangle_vertices(alpha, beta);
  if (!tri) {
    out.empty = true;
    out.notes.push_back("alpha + beta > 1: no population bounds are SOS");
    return out;
  }
  out.empty = false;
  const double s = alpha + beta;
  const double e = floors.population;
  const Point2 apex = (*tri)[2];
  const Point2 top{e, (1.0 - e) / s};
  const Point2 bottom{e, 1.0 - s * e};
  out.boundary.push_back({"upper_line", {top, apex}});
  out.boundary.push_back({"lower_line", {bottom, apex}});
  out.boundary.push_back({"left_edge", {bottom, top}});
  out.notes.push_back(
      "left edge nl = 0 excluded; region clamped to nl >= epsilon_2");
  if (s == 1.0) out.notes.push_back("alpha + beta = 1: triangle is degenerate");
  return out;
}

SweepResult sweep_competition_coeffs(double nl, double nu,
                                     const SweepWindow& window,
                                     const Floors& floors) {
  validate(window);
  if (!(nl >= floors.population && nl > 0.0) || !(nl < nu) ||
      !std::isfinite(nu))
    throw InvalidArgument("competition sweep needs epsilon_2 <= nl < nu");

  SweepResult out;
  out.cells.reserve(window.nx * window.ny);
  for (std::size_t j = 0; j < window.ny; ++j) {
    const double beta = window.y(j);
    for (std::size_t i = 0; i < window.nx; ++i) {
      const double alpha = window.x(i);
      if (!(alpha >= floors.coefficient) || !(beta >= floors.coefficient)) {
        ++out.excluded;
        continue;
      }
      const bool sos =
          may_leonard_sos_condition(alpha, beta, nl, nu, floors).decision;
      out.cells.push_back({alpha, beta, sos});
    }
  }

  const double e = floors.coefficient;
  const double hi = (1.0 - nl) / nu;
  const double lo = std::max(2.0 * e, (1.0 - nu) / nl);
  if (hi < lo) {
    out.empty = true;
    out.notes.push_back(
        "(1 - nl)/nu is below max(2 epsilon_1, (1 - nu)/nl): no "
        "coefficients are SOS");
    return out;
  }
  out.empty = false;
  out.boundary.push_back({"upper_line", {{e, hi - e}, {hi - e, e}}});
  out.boundary.push_back({"lower_line", {{e, lo - e}, {lo - e, e}}});
  out.boundary.push_back({"alpha_floor", {{e, lo - e}, {e, hi - e}}});
  out.boundary.push_back({"beta_floor", {{lo - e, e}, {hi - e, e}}});
  return out;
}

}  // namespace glvsos
