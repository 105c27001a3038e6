#include "glvsos/invariant_sets.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace glvsos {

const char* to_string(Side side) {
  return side == Side::lower ? "lower" : "upper";
}

RectangularSet::RectangularSet(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty()) throw InvalidArgument("rectangle needs dimension >= 1");
  detail::require_dimension(lower_.size(), upper_.size(), "rectangle bounds");
  detail::require_finite(lower_, "rectangle lower bounds");
  detail::require_finite(upper_, "rectangle upper bounds");
  for (std::size_t j = 0; j < lower_.size(); ++j) {
    if (!(lower_[j] < upper_[j])) {
      throw InvalidArgument("rectangle axis " + std::to_string(j + 1) +
                            ": lower bound must be < upper bound");
    }
  }
}

RectangularSet RectangularSet::symmetric(std::size_t n, double lower,
                                         double upper) {
  return RectangularSet(Vector(n, lower), Vector(n, upper));
}

bool RectangularSet::is_population(const Floors& floors) const {
  return std::all_of(lower_.begin(), lower_.end(), [&](double l) {
    return l >= floors.population && l > 0.0;
  });
}

void RectangularSet::require_population(const Floors& floors) const {
  for (std::size_t j = 0; j < lower_.size(); ++j) {
    if (!(lower_[j] >= floors.population && lower_[j] > 0.0)) {
      throw InvalidSet("population rectangle: lower bound of axis " +
                       std::to_string(j + 1) + " is below epsilon_2 = " +
                       std::to_string(floors.population));
    }
  }
}

SmoothSet::SmoothSet(std::size_t dimension,
                     std::vector<SmoothConstraint> constraints)
    : dimension_(dimension), constraints_(std::move(constraints)) {
  if (dimension_ == 0) throw InvalidArgument("smooth set needs dimension >= 1");
  if (constraints_.empty())
    throw InvalidArgument("smooth set needs at least one constraint");
  for (const auto& c : constraints_) {
    if (!c.value || !c.gradient)
      throw InvalidArgument("smooth constraint without value or gradient");
  }
}

SmoothSet SmoothSet::from_rectangle(const RectangularSet& rect) {
  const std::size_t n = rect.dimension();
  std::vector<SmoothConstraint> cs;
  cs.reserve(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    const double l = rect.lower()[j];
    const double u = rect.upper()[j];
    cs.push_back({[j, l](std::span<const double> z) { return l - z[j]; },
                  [j](std::span<const double>, std::span<double> g) {
                    std::fill(g.begin(), g.end(), 0.0);
                    g[j] = -1.0;
                  }});
    cs.push_back({[j, u](std::span<const double> z) { return z[j] - u; },
                  [j](std::span<const double>, std::span<double> g) {
                    std::fill(g.begin(), g.end(), 0.0);
                    g[j] = 1.0;
                  }});
  }
  return SmoothSet(n, std::move(cs));
}

void SmoothSet::check_gradients(std::span<const double> lo,
                                std::span<const double> hi,
                                std::size_t samples, std::uint64_t seed,
                                double rel_tol) const {
  detail::require_dimension(dimension_, lo.size(), "gradient check box");
  detail::require_dimension(dimension_, hi.size(), "gradient check box");
  std::mt19937_64 rng(seed);
  Vector z(dimension_), probe(dimension_), grad(dimension_);
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < dimension_; ++i) {
      std::uniform_real_distribution<double> dist(lo[i], hi[i]);
      z[i] = dist(rng);
    }
    for (std::size_t k = 0; k < constraints_.size(); ++k) {
      const auto& c = constraints_[k];
      c.gradient(z, grad);
      for (std::size_t i = 0; i < dimension_; ++i) {
        const double h = 1e-6 * std::max(1.0, std::abs(z[i]));
        probe = z;
        probe[i] = z[i] + h;
        const double fp = c.value(probe);
        probe[i] = z[i] - h;
        const double fm = c.value(probe);
        const double fd = (fp - fm) / (2.0 * h);
        const double scale = std::max({1.0, std::abs(fd), std::abs(grad[i])});
        if (!(std::abs(fd - grad[i]) <= rel_tol * scale)) {
          throw InvalidArgument("gradient of constraint " +
                                std::to_string(k + 1) +
                                " disagrees with finite differences on axis " +
                                std::to_string(i + 1));
        }
      }
    }
  }
}

bool contains(const RectangularSet& set, std::span<const double> point,
              double tol) {
  detail::require_dimension(set.dimension(), point.size(), "point");
  for (std::size_t j = 0; j < point.size(); ++j) {
    if (!(point[j] >= set.lower()[j] - tol && point[j] <= set.upper()[j] + tol))
      return false;
  }
  return true;
}

bool contains(const SmoothSet& set, std::span<const double> point,
              double tol) {
  detail::require_dimension(set.dimension(), point.size(), "point");
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (!(set.constraint(k).value(point) <= tol)) return false;
  }
  return true;
}

ActiveSet active_set(const RectangularSet& set, std::span<const double> point,
                     double tol) {
  if (!contains(set, point, tol))
    throw PreconditionError("active_set: point lies outside the rectangle");
  ActiveSet active;
  for (std::size_t k = 0; k < point.size(); ++k) {
    // lower < upper, so with tol below half the width at most one side fires;
    // the nearer bound wins otherwise.
    const double du = std::abs(point[k] - set.upper()[k]);
    const double dl = std::abs(point[k] - set.lower()[k]);
    if (du <= tol && du < dl) {
      active.upper.push_back(k);
    } else if (dl <= tol) {
      active.lower.push_back(k);
    } else if (du <= tol) {
      active.upper.push_back(k);
    }
  }
  return active;
}

ActiveSet active_set(const SmoothSet& set, std::span<const double> point,
                     double tol) {
  if (!contains(set, point, tol))
    throw PreconditionError("active_set: point lies outside the smooth set");
  ActiveSet active;
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (std::abs(set.constraint(k).value(point)) <= tol)
      active.indices.push_back(k);
  }
  return active;
}

// ---------------------------------------------------------------------------
// BoundaryGrid

BoundaryGrid::BoundaryGrid(const RectangularSet& rect, std::size_t resolution)
    : rect_(rect), resolution_(resolution) {
  if (resolution_ < 2)
    throw InvalidArgument("boundary grid resolution must be >= 2");
}

std::size_t BoundaryGrid::points_per_face() const {
  std::size_t count = 1;
  for (std::size_t j = 1; j < rect_.dimension(); ++j) count *= resolution_;
  return count;
}

double BoundaryGrid::coordinate(std::size_t axis, std::size_t k) const {
  const double l = rect_.lower()[axis];
  const double u = rect_.upper()[axis];
  if (k == 0) return l;
  if (k + 1 == resolution_) return u;
  const double t = static_cast<double>(k) / static_cast<double>(resolution_ - 1);
  return l + t * (u - l);
}

BoundaryGrid::iterator BoundaryGrid::begin() const {
  return iterator(this, 0, faces());
}

BoundaryGrid::iterator BoundaryGrid::face_begin(std::size_t face) const {
  if (face >= faces()) throw InvalidArgument("face index out of range");
  return iterator(this, face, face + 1);
}

BoundaryGrid::iterator::iterator(const BoundaryGrid* grid,
                                 std::size_t face_begin, std::size_t face_end)
    : grid_(grid),
      face_(face_begin),
      face_end_(face_end),
      counter_(grid->rect().dimension(), 0),
      done_(face_begin >= face_end) {
  sample_.point.resize(grid->rect().dimension());
  if (!done_) load();
}

void BoundaryGrid::iterator::load() {
  const RectangularSet& rect = grid_->rect();
  const std::size_t n = rect.dimension();
  const std::size_t axis = face_ / 2;
  const Side side = face_ % 2 == 0 ? Side::lower : Side::upper;
  sample_.face_axis = axis;
  sample_.face_side = side;
  sample_.active.upper.clear();
  sample_.active.lower.clear();
  const std::size_t last = grid_->resolution() - 1;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == axis) {
      sample_.point[j] = rect.bound(j, side);
      (side == Side::upper ? sample_.active.upper : sample_.active.lower)
          .push_back(j);
      continue;
    }
    sample_.point[j] = grid_->coordinate(j, counter_[j]);
    if (counter_[j] == 0) sample_.active.lower.push_back(j);
    if (counter_[j] == last) sample_.active.upper.push_back(j);
  }
}

BoundaryGrid::iterator& BoundaryGrid::iterator::operator++() {
  const std::size_t n = counter_.size();
  const std::size_t axis = face_ / 2;
  // Odometer over the free axes, last axis fastest.
  for (std::size_t jj = n; jj-- > 0;) {
    if (jj == axis) continue;
    if (++counter_[jj] < grid_->resolution()) {
      load();
      return *this;
    }
    counter_[jj] = 0;
  }
  if (++face_ >= face_end_) {
    done_ = true;
    return *this;
  }
  load();
  return *this;
}

std::vector<Vector> vertex_set(const RectangularSet& rect) {
  const std::size_t n = rect.dimension();
  std::vector<Vector> out;
  out.reserve(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Vector v(n);
    for (std::size_t j = 0; j < n; ++j) {
      const bool up = (mask >> (n - 1 - j)) & 1U;
      v[j] = up ? rect.upper()[j] : rect.lower()[j];
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace glvsos
