#pragma once

// Worst case of the GLV face bracket over one rectangle face.

#include <cmath>
#include <cstddef>

#include "glvsos/glv_model.hpp"
#include "glvsos/invariant_sets.hpp"

namespace glvsos::detail {

struct FaceExtreme {
  /// max over the face of sigma * (1 - diag N_i - sum_{j != i} alpha_ij N_j),
  /// sigma = +1 on (upper, r_i > 0) and (lower, r_i < 0), -1 otherwise.
  /// <= 0 means the face is not crossed outward anywhere.
  double margin = 0.0;
  /// Sum of absolute terms, for relative rounding tolerance.
  double scale = 1.0;
  /// Face vertex attaining the maximum (ties broken toward lower bounds).
  Vector vertex;
};

/// +1 if a larger bracket pushes outward through (axis i, side), else -1.
inline double outward_sign(const GlvParameters& params, std::size_t i,
                           Side side) {
  const double s = side == Side::upper ? 1.0 : -1.0;
  return params.growth(i) > 0.0 ? s : -s;
}

inline FaceExtreme glv_face_extreme(const GlvParameters& params,
                                    const RectangularSet& rect, std::size_t i,
                                    Side side, double diag) {
  const std::size_t n = params.species();
  const double sigma = outward_sign(params, i, side);
  FaceExtreme out;
  out.vertex.resize(n);
  out.vertex[i] = rect.bound(i, side);
  double bracket = 1.0 - diag * out.vertex[i];
  out.scale = 1.0 + std::abs(diag * out.vertex[i]);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    const double a = params.competition(i, j);
    // d(sigma * bracket)/dN_j = -sigma * a_ij; push N_j the way that grows it.
    out.vertex[j] = -sigma * a > 0.0 ? rect.upper()[j] : rect.lower()[j];
    bracket -= a * out.vertex[j];
    out.scale += std::abs(a * out.vertex[j]);
  }
  out.margin = sigma * bracket;
  return out;
}

}  // namespace glvsos::detail
