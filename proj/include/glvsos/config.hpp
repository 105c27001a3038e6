#pragma once

// JSON configuration ingestion. Every error names the offending key.

#include <optional>
#include <string>

#include "glvsos/glv_model.hpp"
#include "glvsos/invariant_sets.hpp"
#include "glvsos/ode_sim.hpp"
#include "glvsos/report.hpp"
#include "glvsos/sizos_synthesis.hpp"

namespace glvsos {

/// Malformed or missing configuration (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct MayLeonardConfig {
  double alpha = 0.0;
  double beta = 0.0;
};

struct ModelConfig {
  GlvParameters params;
  std::optional<MayLeonardConfig> may_leonard;
};

/// Symmetric bounds when the set was given (or is expressible) as nl/nu.
struct SymmetricBounds {
  double nl = 0.0;
  double nu = 0.0;
};

Json load_config_file(const std::string& path);

Floors parse_floors(const Json& config);

/// Top-level `n`, `r`, `alpha`, or `may_leonard: {alpha, beta}`.
ModelConfig parse_model(const Json& config, const Floors& floors);

/// `set: {lower, upper}` or `set: {nl, nu, n}`.
RectangularSet parse_set(const Json& config, std::size_t n);

/// `controls: {lower, upper}` or `controls: {al, au}`.
ControlBox parse_controls(const Json& config, std::size_t n);

/// `integrator: {abs_tol, rel_tol, max_step, samples, record_steps}`.
IntegrateOptions parse_integrator(const Json& config);

std::optional<SymmetricBounds> symmetric_bounds(const RectangularSet& rect);
std::optional<std::pair<double, double>> uniform_controls(const ControlBox& box);

/// Typed lookups with defaults; throw ConfigError naming `key`.
double get_number(const Json& config, const std::string& key, double fallback);
std::size_t get_count(const Json& config, const std::string& key,
                      std::size_t fallback);
std::string get_string(const Json& config, const std::string& key,
                       const std::string& fallback);
bool get_bool(const Json& config, const std::string& key, bool fallback);

}  // namespace glvsos
