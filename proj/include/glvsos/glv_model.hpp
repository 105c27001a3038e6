#pragma once

// Gause-Lotka-Volterra population model
//
//   dN_i/dt = r_i N_i (1 - sum_j alpha_ij N_j),   i = 1..n
//
// plus the cyclic May-Leonard three-species instance and its closed-form
// equilibria.

#include <cstddef>
#include <span>
#include <vector>

#include "glvsos/common.hpp"

namespace glvsos {

/// Growth rates and competition matrix of an n-species GLV model.
/// All entries finite; the matrix is stored row-major.
class GlvParameters {
 public:
  /// `alpha` is given as n rows of n entries.
  GlvParameters(Vector growth, std::vector<Vector> alpha);

  std::size_t species() const { return growth_.size(); }
  double growth(std::size_t i) const { return growth_[i]; }
  double competition(std::size_t i, std::size_t j) const {
    return alpha_[i * species() + j];
  }
  const Vector& growth_rates() const { return growth_; }
  std::vector<Vector> competition_rows() const;

  /// Copy with the diagonal alpha_ii replaced by `diagonal`.
  GlvParameters with_diagonal(std::span<const double> diagonal) const;

 private:
  Vector growth_;
  Vector alpha_;
};

/// Sign-based index sets. Indices are zero-based.
struct IndexSets {
  std::vector<std::vector<std::size_t>> a_plus;   // j with alpha_ij > 0
  std::vector<std::vector<std::size_t>> a_minus;  // j with alpha_ij < 0
  std::vector<std::size_t> r_plus;                // i with r_i > 0
  std::vector<std::size_t> r_minus;               // i with r_i < 0
};

/// r_i N_i (1 - sum_j alpha_ij N_j), evaluated without clipping.
Vector vector_field(const GlvParameters& params, std::span<const double> state);

/// In-place variant; `rate` must have length n.
void vector_field(const GlvParameters& params, std::span<const double> state,
                  std::span<double> rate);

/// The model as a type-erased callable (captures a copy of `params`).
VectorField as_field(const GlvParameters& params);

/// Throws ModelDegenerate if some r_i == 0.
IndexSets build_index_sets(const GlvParameters& params);

/// Cyclic May-Leonard model: r = 1, alpha_ii = 1,
/// alpha_12 = alpha_23 = alpha_31 = alpha, alpha_21 = alpha_32 = alpha_13 = beta.
GlvParameters may_leonard(double alpha, double beta, const Floors& floors = {});

inline constexpr double kSingularityTolerance = 1e-12;

struct MayLeonardEquilibria {
  std::vector<Vector> points;
  /// |1 - alpha*beta| below kSingularityTolerance; the three two-species
  /// equilibria are undefined and omitted from `points`.
  bool singular = false;
};

/// Origin, the three single-species points, the three two-species points
/// (unless singular) and the coexistence point, in that order.
MayLeonardEquilibria may_leonard_equilibria(double alpha, double beta);

/// Coexistence point (1,1,1)/(1+alpha+beta).
Vector may_leonard_coexistence(double alpha, double beta);

/// Local stability of the coexistence point: alpha + beta < 2 (strict).
bool interior_equilibrium_stable(double alpha, double beta);

/// alpha + beta == 2 up to rounding; reported as not stable.
bool interior_stability_marginal(double alpha, double beta);

}  // namespace glvsos
