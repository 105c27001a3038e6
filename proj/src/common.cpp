#include "glvsos/common.hpp"

#include <cmath>
#include <string>

namespace glvsos {

Vector evaluate(const VectorField& field, std::span<const double> state) {
  Vector rate(state.size(), 0.0);
  field(state, rate);
  return rate;
}

namespace detail {

void require_dimension(std::size_t expected, std::size_t actual,
                       const char* what) {
  if (expected != actual) {
    throw InvalidArgument(std::string(what) + ": expected dimension " +
                          std::to_string(expected) + ", got " +
                          std::to_string(actual));
  }
}

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw InvalidArgument(std::string(what) + ": non-finite entry");
    }
  }
}

}  // namespace detail
}  // namespace glvsos
