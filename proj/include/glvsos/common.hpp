#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace glvsos {

using Vector = std::vector<double>;

/// Autonomous right-hand side dx/dt = f(x). Writes f(state) into `rate`.
using VectorField =
    std::function<void(std::span<const double> state, std::span<double> rate)>;

/// Forced right-hand side dx/dt = f(x, u).
using ControlledField = std::function<void(std::span<const double> state,
                                           std::span<const double> control,
                                           std::span<double> rate)>;

/// Evaluates `field` at `state` into a fresh vector.
Vector evaluate(const VectorField& field, std::span<const double> state);

/// Positivity floors for competition coefficients and population bounds.
struct Floors {
  double coefficient = 1e-9;  // epsilon_1
  double population = 1e-9;   // epsilon_2
};

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument: dimension mismatch, non-finite entry, floor violation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Some growth rate r_i is zero, so R+ and R- do not cover all species.
class ModelDegenerate : public Error {
 public:
  using Error::Error;
};

/// The rectangle is not a valid population set (lower bound below floor).
class InvalidSet : public Error {
 public:
  using Error::Error;
};

/// Operation called on a point that violates its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A sampling oracle received no usable boundary points.
class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

/// Integrator failure surfaced as an error (CLI exit code 4).
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

namespace detail {
void require_dimension(std::size_t expected, std::size_t actual,
                       const char* what);
void require_finite(std::span<const double> values, const char* what);
}  // namespace detail

}  // namespace glvsos
