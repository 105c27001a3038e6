#pragma once

// Candidate sets: closed rectangles and smooth inequality sets
// { z : phi_k(z) <= 0 for all k }, with active-constraint detection and
// boundary sampling.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <span>
#include <vector>

#include "glvsos/common.hpp"

namespace glvsos {

enum class Side { lower, upper };

const char* to_string(Side side);

/// Closed box lower_j <= z_j <= upper_j with lower_j < upper_j.
class RectangularSet {
 public:
  RectangularSet(Vector lower, Vector upper);

  /// Same bounds on every axis.
  static RectangularSet symmetric(std::size_t n, double lower, double upper);

  std::size_t dimension() const { return lower_.size(); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  double bound(std::size_t axis, Side side) const {
    return side == Side::lower ? lower_[axis] : upper_[axis];
  }

  /// Population rectangle: every lower bound >= epsilon_2 > 0.
  bool is_population(const Floors& floors = {}) const;
  /// Throws InvalidSet unless is_population(floors).
  void require_population(const Floors& floors = {}) const;

 private:
  Vector lower_;
  Vector upper_;
};

/// One continuously differentiable constraint phi(z) <= 0 with its gradient.
struct SmoothConstraint {
  std::function<double(std::span<const double>)> value;
  std::function<void(std::span<const double>, std::span<double>)> gradient;
};

class SmoothSet {
 public:
  SmoothSet(std::size_t dimension, std::vector<SmoothConstraint> constraints);

  /// Encodes a rectangle as 2n affine constraints, ordered
  /// (l_1 - z_1, z_1 - u_1, l_2 - z_2, ...).
  static SmoothSet from_rectangle(const RectangularSet& rect);

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return constraints_.size(); }
  const SmoothConstraint& constraint(std::size_t k) const {
    return constraints_[k];
  }

  /// Central-difference check of every gradient at `samples` points drawn
  /// uniformly from the box [lo, hi]. Throws InvalidArgument naming the
  /// first constraint whose relative error exceeds `rel_tol`.
  void check_gradients(std::span<const double> lo, std::span<const double> hi,
                       std::size_t samples = 32, std::uint64_t seed = 7,
                       double rel_tol = 1e-4) const;

 private:
  std::size_t dimension_;
  std::vector<SmoothConstraint> constraints_;
};

/// Active constraints at a point. For rectangles `upper`/`lower` hold the
/// pinned axes (S^U, S^L); for smooth sets `indices` holds k with phi_k ~ 0.
struct ActiveSet {
  std::vector<std::size_t> upper;
  std::vector<std::size_t> lower;
  std::vector<std::size_t> indices;

  bool empty() const {
    return upper.empty() && lower.empty() && indices.empty();
  }
  std::size_t count() const {
    return upper.size() + lower.size() + indices.size();
  }
};

inline constexpr double kActiveTolerance = 1e-12;

bool contains(const RectangularSet& set, std::span<const double> point,
              double tol = 0.0);
bool contains(const SmoothSet& set, std::span<const double> point,
              double tol = 0.0);

/// Throws PreconditionError if the point lies outside the set beyond `tol`.
ActiveSet active_set(const RectangularSet& set, std::span<const double> point,
                     double tol = kActiveTolerance);
ActiveSet active_set(const SmoothSet& set, std::span<const double> point,
                     double tol = kActiveTolerance);

/// A grid point on one face of a rectangle.
struct BoundarySample {
  Vector point;
  ActiveSet active;
  std::size_t face_axis = 0;
  Side face_side = Side::lower;
};

/// Lazily enumerated boundary grid: for each face (axis pinned at lower then
/// upper, axes in order) a uniform grid of `resolution` points per free axis,
/// edges included. Corner and edge points recur on every face they touch.
class BoundaryGrid {
 public:
  BoundaryGrid(const RectangularSet& rect, std::size_t resolution);

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = BoundarySample;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    const BoundarySample& operator*() const { return sample_; }
    const BoundarySample* operator->() const { return &sample_; }
    iterator& operator++();
    void operator++(int) { ++*this; }
    bool operator==(std::default_sentinel_t) const { return done_; }

   private:
    friend class BoundaryGrid;
    iterator(const BoundaryGrid* grid, std::size_t face_begin,
             std::size_t face_end);
    void load();

    const BoundaryGrid* grid_ = nullptr;
    std::size_t face_ = 0;
    std::size_t face_end_ = 0;
    std::vector<std::size_t> counter_;
    BoundarySample sample_;
    bool done_ = true;
  };

  iterator begin() const;
  std::default_sentinel_t end() const { return {}; }

  /// Iterates only face `face` (0 .. 2n-1; axis = face / 2, side = face % 2).
  iterator face_begin(std::size_t face) const;

  std::size_t faces() const { return 2 * rect_.dimension(); }
  std::size_t points_per_face() const;
  /// 2 n resolution^(n-1), duplicates included.
  std::size_t size() const { return faces() * points_per_face(); }
  const RectangularSet& rect() const { return rect_; }
  std::size_t resolution() const { return resolution_; }

  /// Coordinate of grid index k on `axis` (bounds are hit exactly).
  double coordinate(std::size_t axis, std::size_t k) const;

 private:
  RectangularSet rect_;
  std::size_t resolution_;
};

/// All 2^n corners; lower before upper, last axis varying fastest.
std::vector<Vector> vertex_set(const RectangularSet& rect);

}  // namespace glvsos
