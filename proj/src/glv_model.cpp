#include "glvsos/glv_model.hpp"

#include <cmath>
#include <string>

namespace glvsos {

GlvParameters::GlvParameters(Vector growth, std::vector<Vector> alpha)
    : growth_(std::move(growth)) {
  const std::size_t n = growth_.size();
  if (n == 0) throw InvalidArgument("GLV model needs at least one species");
  detail::require_dimension(n, alpha.size(), "competition matrix rows");
  detail::require_finite(growth_, "growth rates");
  alpha_.reserve(n * n);
  for (const auto& row : alpha) {
    detail::require_dimension(n, row.size(), "competition matrix row");
    detail::require_finite(row, "competition matrix");
    alpha_.insert(alpha_.end(), row.begin(), row.end());
  }
}

std::vector<Vector> GlvParameters::competition_rows() const {
  const std::size_t n = species();
  std::vector<Vector> rows(n, Vector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = competition(i, j);
  return rows;
}

GlvParameters GlvParameters::with_diagonal(
    std::span<const double> diagonal) const {
  detail::require_dimension(species(), diagonal.size(), "diagonal");
  GlvParameters copy = *this;
  for (std::size_t i = 0; i < species(); ++i)
    copy.alpha_[i * species() + i] = diagonal[i];
  return copy;
}

void vector_field(const GlvParameters& params, std::span<const double> state,
                  std::span<double> rate) {
  const std::size_t n = params.species();
  detail::require_dimension(n, state.size(), "state");
  detail::require_dimension(n, rate.size(), "rate");
  for (std::size_t i = 0; i < n; ++i) {
    double bracket = 1.0;
    for (std::size_t j = 0; j < n; ++j)
      bracket -= params.competition(i, j) * state[j];
    rate[i] = params.growth(i) * state[i] * bracket;
  }
}

Vector vector_field(const GlvParameters& params,
                    std::span<const double> state) {
  Vector rate(params.species());
  vector_field(params, state, rate);
  return rate;
}

VectorField as_field(const GlvParameters& params) {
  return [params](std::span<const double> state, std::span<double> rate) {
    vector_field(params, state, rate);
  };
}

IndexSets build_index_sets(const GlvParameters& params) {
  const std::size_t n = params.species();
  IndexSets sets;
  sets.a_plus.resize(n);
  sets.a_minus.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = params.growth(i);
    if (r > 0.0) {
      sets.r_plus.push_back(i);
    } else if (r < 0.0) {
      sets.r_minus.push_back(i);
    } else {
      throw ModelDegenerate("growth rate r_" + std::to_string(i + 1) +
                            " is zero");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double a = params.competition(i, j);
      if (a > 0.0) sets.a_plus[i].push_back(j);
      if (a < 0.0) sets.a_minus[i].push_back(j);
    }
  }
  return sets;
}

GlvParameters may_leonard(double alpha, double beta, const Floors& floors) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) ||
      alpha < floors.coefficient || beta < floors.coefficient) {
    throw InvalidArgument(
        "May-Leonard coefficients must satisfy alpha, beta >= epsilon_1 = " +
        std::to_string(floors.coefficient));
  }
  return GlvParameters({1.0, 1.0, 1.0}, {{1.0, alpha, beta},
                                         {beta, 1.0, alpha},
                                         {alpha, beta, 1.0}});
}

Vector may_leonard_coexistence(double alpha, double beta) {
  const double c = 1.0 / (1.0 + alpha + beta);
  return {c, c, c};
}

MayLeonardEquilibria may_leonard_equilibria(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw InvalidArgument("May-Leonard equilibria need alpha, beta > 0");
  MayLeonardEquilibria out;
  out.points = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const double det = 1.0 - alpha * beta;
  if (std::abs(det) < kSingularityTolerance) {
    out.singular = true;
  } else {
    const double p = (1.0 - alpha) / det;
    const double q = (1.0 - beta) / det;
    out.points.push_back({p, q, 0.0});
    out.points.push_back({q, 0.0, p});
    out.points.push_back({0.0, p, q});
  }
  out.points.push_back(may_leonard_coexistence(alpha, beta));
  return out;
}

bool interior_equilibrium_stable(double alpha, double beta) {
  return alpha + beta < 2.0;
}

bool interior_stability_marginal(double alpha, double beta) {
  return std::abs(alpha + beta - 2.0) <= 4.0 * 2.220446049250313e-16;
}

}  // namespace glvsos
