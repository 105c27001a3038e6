#pragma once

// Maximal May-Leonard SOS regions: the population-bound triangle for fixed
// (alpha, beta) and the competition-coefficient trapezoid for fixed bounds.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "glvsos/common.hpp"

namespace glvsos {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// (0, 1), (0, 1/(alpha+beta)), (c, c) with c = 1/(1+alpha+beta); empty
/// when alpha + beta > 1.
std::optional<std::array<Point2, 3>> triangle_vertices(double alpha,
                                                       double beta);

struct SweepWindow {
  double x_min = 0.0, x_max = 1.0;
  double y_min = 0.0, y_max = 1.0;
  std::size_t nx = 201, ny = 201;

  double x(std::size_t i) const;
  double y(std::size_t j) const;
};

struct SweepCell {
  double x = 0.0;
  double y = 0.0;
  bool sos = false;
};

struct Polyline {
  std::string name;
  std::vector<Point2> points;
};

struct SweepResult {
  /// In-domain grid points, row-major (y outer, x inner).
  std::vector<SweepCell> cells;
  /// Grid points outside the condition's domain (e.g. nu <= nl).
  std::size_t excluded = 0;
  std::vector<Polyline> boundary;
  bool empty = true;
  std::vector<std::string> notes;

  std::size_t count_sos() const;
};

/// Classifies (nl, nu) = (x, y) grid points with may_leonard_sos_condition.
/// Points with nl < epsilon_2 or nu <= nl are excluded.
SweepResult sweep_population_bounds(double alpha, double beta,
                                    const SweepWindow& window,
                                    const Floors& floors = {});

/// Classifies (alpha, beta) = (x, y) grid points; points below epsilon_1
/// are excluded. Boundary lines are alpha + beta = (1 - nl)/nu and
/// alpha + beta = max(2 epsilon_1, (1 - nu)/nl).
SweepResult sweep_competition_coeffs(double nl, double nu,
                                     const SweepWindow& window,
                                     const Floors& floors = {});

}  // namespace glvsos
