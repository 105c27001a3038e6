#pragma once

// Machine-readable reports: JSON with 17 significant digits and CSV tables.

#include <string>
#include <vector>

#include <json.hpp>

#include "glvsos/glv_model.hpp"
#include "glvsos/ode_sim.hpp"
#include "glvsos/region_sweep.hpp"
#include "glvsos/sizos_synthesis.hpp"
#include "glvsos/sos_analysis.hpp"

namespace glvsos {

using Json = nlohmann::ordered_json;

/// %.17g, with -0 printed as 0.
std::string format_number(double value);

/// Serializes with numbers at 17 significant digits; non-finite numbers
/// become null. Parsing the output and dumping again is byte-identical.
std::string dump_json(const Json& doc, int indent = 2);

Json to_json(const GlvParameters& params);
Json to_json(const RectangularSet& rect);
Json to_json(const ControlBox& box);
Json to_json(const OutwardWitness& witness);
Json to_json(const Verdict& verdict);
Json to_json(const MinimaxResult& result, double tol);
Json to_json(const ContainmentReport& report);
Json to_json(const RampFeedback& ramp);

std::string trajectory_csv(const Trajectory& traj);
std::string feedback_csv(const std::vector<RampFeedback>& ramps);
std::string mask_csv(const SweepResult& sweep);
std::string polyline_csv(const SweepResult& sweep);
std::string margins_csv(const Verdict& verdict);

}  // namespace glvsos
