#include "glvsos/config.hpp"

#include <cmath>
#include <fstream>

namespace glvsos {
namespace {

double number_at(const Json& node, const std::string& key) {
  if (!node.is_number())
    throw ConfigError("config key '" + key + "' must be a number");
  return node.get<double>();
}

Vector vector_at(const Json& node, const std::string& key) {
  if (!node.is_array())
    throw ConfigError("config key '" + key + "' must be an array of numbers");
  Vector out;
  for (std::size_t i = 0; i < node.size(); ++i)
    out.push_back(number_at(node[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

const Json& require(const Json& node, const std::string& key,
                    const std::string& path) {
  if (!node.is_object() || !node.contains(key))
    throw ConfigError("config is missing key '" + path + "'");
  return node.at(key);
}

}  // namespace

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

double get_number(const Json& config, const std::string& key, double fallback) {
  if (!config.is_object() || !config.contains(key)) return fallback;
  return number_at(config.at(key), key);
}

std::size_t get_count(const Json& config, const std::string& key,
                      std::size_t fallback) {
  if (!config.is_object() || !config.contains(key)) return fallback;
  const Json& v = config.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigError("config key '" + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

std::string get_string(const Json& config, const std::string& key,
                       const std::string& fallback) {
  if (!config.is_object() || !config.contains(key)) return fallback;
  if (!config.at(key).is_string())
    throw ConfigError("config key '" + key + "' must be a string");
  return config.at(key).get<std::string>();
}

bool get_bool(const Json& config, const std::string& key, bool fallback) {
  if (!config.is_object() || !config.contains(key)) return fallback;
  if (!config.at(key).is_boolean())
    throw ConfigError("config key '" + key + "' must be a boolean");
  return config.at(key).get<bool>();
}

Floors parse_floors(const Json& config) {
  Floors f;
  if (config.is_object() && config.contains("floors")) {
    const Json& node = config.at("floors");
    f.coefficient = get_number(node, "coefficient", f.coefficient);
    f.population = get_number(node, "population", f.population);
    if (!(f.coefficient > 0.0))
      throw ConfigError("config key 'floors.coefficient' must be positive");
    if (!(f.population > 0.0))
      throw ConfigError("config key 'floors.population' must be positive");
  }
  return f;
}

ModelConfig parse_model(const Json& config, const Floors& floors) {
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  try {
    if (config.contains("may_leonard")) {
      const Json& ml = config.at("may_leonard");
      MayLeonardConfig ml_cfg{
          number_at(require(ml, "alpha", "may_leonard.alpha"), "may_leonard.alpha"),
          number_at(require(ml, "beta", "may_leonard.beta"), "may_leonard.beta")};
      return ModelConfig{may_leonard(ml_cfg.alpha, ml_cfg.beta, floors), ml_cfg};
    }
    const Vector r = vector_at(require(config, "r", "r"), "r");
    const Json& alpha = require(config, "alpha", "alpha");
    if (!alpha.is_array())
      throw ConfigError("config key 'alpha' must be an array of rows");
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < alpha.size(); ++i)
      rows.push_back(vector_at(alpha[i], "alpha[" + std::to_string(i) + "]"));
    if (config.contains("n")) {
      const std::size_t n = get_count(config, "n", 0);
      if (n != r.size())
        throw ConfigError("config key 'n' disagrees with the length of 'r'");
    }
    return ModelConfig{GlvParameters(r, rows), std::nullopt};
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config model: ") + e.what());
  }
}

RectangularSet parse_set(const Json& config, std::size_t n) {
  const Json& set = require(config, "set", "set");
  try {
    if (set.contains("lower") || set.contains("upper")) {
      Vector lo = vector_at(require(set, "lower", "set.lower"), "set.lower");
      Vector hi = vector_at(require(set, "upper", "set.upper"), "set.upper");
      if (lo.size() != n || hi.size() != n)
        throw ConfigError("config key 'set' has bounds of the wrong dimension");
      return RectangularSet(std::move(lo), std::move(hi));
    }
    const double nl = number_at(require(set, "nl", "set.nl"), "set.nl");
    const double nu = number_at(require(set, "nu", "set.nu"), "set.nu");
    const std::size_t dim = get_count(set, "n", n);
    if (dim != n)
      throw ConfigError("config key 'set.n' disagrees with the model dimension");
    return RectangularSet::symmetric(n, nl, nu);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config key 'set': ") + e.what());
  }
}

ControlBox parse_controls(const Json& config, std::size_t n) {
  const Json& c = require(config, "controls", "controls");
  try {
    if (c.contains("lower") || c.contains("upper")) {
      Vector lo = vector_at(require(c, "lower", "controls.lower"), "controls.lower");
      Vector hi = vector_at(require(c, "upper", "controls.upper"), "controls.upper");
      if (lo.size() != n || hi.size() != n)
        throw ConfigError("config key 'controls' has the wrong dimension");
      return ControlBox(std::move(lo), std::move(hi));
    }
    const double al = number_at(require(c, "al", "controls.al"), "controls.al");
    const double au = number_at(require(c, "au", "controls.au"), "controls.au");
    return ControlBox::uniform(n, al, au);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("config key 'controls': ") + e.what());
  }
}

IntegrateOptions parse_integrator(const Json& config) {
  IntegrateOptions opt;
  if (!config.is_object() || !config.contains("integrator")) return opt;
  const Json& node = config.at("integrator");
  opt.abs_tol = get_number(node, "abs_tol", opt.abs_tol);
  opt.rel_tol = get_number(node, "rel_tol", opt.rel_tol);
  opt.max_step = get_number(node, "max_step", opt.max_step);
  opt.output_samples = get_count(node, "samples", opt.output_samples);
  opt.record_steps = get_bool(node, "record_steps", opt.record_steps);
  opt.blowup = get_number(node, "blowup", opt.blowup);
  if (!(opt.abs_tol > 0.0) || !(opt.rel_tol > 0.0))
    throw ConfigError("config key 'integrator': tolerances must be positive");
  if (opt.output_samples == 0)
    throw ConfigError("config key 'integrator.samples' must be >= 1");
  return opt;
}

std::optional<SymmetricBounds> symmetric_bounds(const RectangularSet& rect) {
  const double nl = rect.lower().front();
  const double nu = rect.upper().front();
  for (std::size_t j = 0; j < rect.dimension(); ++j)
    if (rect.lower()[j] != nl || rect.upper()[j] != nu) return std::nullopt;
  return SymmetricBounds{nl, nu};
}

std::optional<std::pair<double, double>> uniform_controls(const ControlBox& box) {
  const double al = box.lower().front();
  const double au = box.upper().front();
  for (std::size_t j = 0; j < box.size(); ++j)
    if (box.lower()[j] != al || box.upper()[j] != au) return std::nullopt;
  return std::make_pair(al, au);
}

}  // namespace glvsos
