#include "glvsos/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace glvsos {

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

void write_string(std::ostringstream& os, const std::string& s) {
  // Reuse the library's escaping for strings.
  os << Json(s).dump();
}

void write(std::ostringstream& os, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(indent * (depth + 1), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(indent * depth, ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad;
        write_string(os, it.key());
        os << (indent > 0 ? ": " : ":");
        write(os, it.value(), indent, depth + 1);
      }
      os << nl << close_pad << '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[' << nl;
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad;
        write(os, v, indent, depth + 1);
      }
      os << nl << close_pad << ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      os << (std::isfinite(v) ? format_number(v) : "null");
      return;
    }
    default:
      os << j.dump();
  }
}

Json vec(const Vector& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

}  // namespace

std::string dump_json(const Json& doc, int indent) {
  std::ostringstream os;
  write(os, doc, indent, 0);
  return os.str();
}

Json to_json(const GlvParameters& params) {
  Json j;
  j["n"] = params.species();
  j["r"] = vec(params.growth_rates());
  Json rows = Json::array();
  for (const auto& row : params.competition_rows()) rows.push_back(vec(row));
  j["alpha"] = std::move(rows);
  return j;
}

Json to_json(const RectangularSet& rect) {
  return Json{{"lower", vec(rect.lower())}, {"upper", vec(rect.upper())}};
}

Json to_json(const ControlBox& box) {
  return Json{{"lower", vec(box.lower())}, {"upper", vec(box.upper())}};
}

Json to_json(const OutwardWitness& w) {
  Json j;
  j["point"] = vec(w.point);
  if (w.side) {
    j["axis"] = w.constraint + 1;
    j["side"] = to_string(*w.side);
  } else {
    j["constraint"] = w.constraint + 1;
  }
  j["outward_rate"] = w.outward_rate;
  return j;
}

Json to_json(const Verdict& v) {
  Json j;
  j["decision"] = v.decision;
  j["method"] = to_string(v.method);
  j["tolerance"] = v.tolerance;
  Json margins = Json::object();
  for (const auto& m : v.margins) margins[m.id] = m.value;
  j["margins"] = std::move(margins);
  j["witness"] = v.witness ? to_json(*v.witness) : Json(nullptr);
  if (v.method == Method::face_sampled || v.method == Method::smooth_sampled) {
    j["samples"] = v.samples;
    j["skipped"] = v.skipped;
  }
  return j;
}

Json to_json(const MinimaxResult& r, double tol) {
  Json j;
  j["decision"] = r.margin <= tol;
  j["method"] = to_string(Method::minimax);
  j["margin"] = r.margin;
  j["tolerance"] = tol;
  j["state"] = vec(r.state);
  j["control"] = vec(r.control);
  if (r.side) {
    j["axis"] = r.constraint + 1;
    j["side"] = to_string(*r.side);
  } else {
    j["constraint"] = r.constraint + 1;
  }
  j["states_scanned"] = r.states_scanned;
  return j;
}

Json to_json(const ContainmentReport& c) {
  Json j;
  j["contained"] = c.contained;
  if (c.first_exit) {
    j["first_exit_time"] = c.first_exit->time;
    j["exit_axis"] = c.first_exit->axis + 1;
    j["exit_side"] = to_string(c.first_exit->side);
  } else {
    j["first_exit_time"] = nullptr;
    j["exit_axis"] = nullptr;
    j["exit_side"] = nullptr;
  }
  j["max_excursion"] = c.max_excursion;
  return j;
}

Json to_json(const RampFeedback& r) {
  return Json{{"control_index", r.control_index + 1},
              {"b0", r.b0},
              {"b1", r.b1},
              {"b2", r.b2},
              {"b3", r.b3},
              {"low", r.at_lower},
              {"nominal", r.nominal},
              {"high", r.at_upper},
              {"lower_slope", r.lower_slope()},
              {"upper_slope", r.upper_slope()}};
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << 't';
  const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
  for (std::size_t i = 0; i < n; ++i) os << ",N" << i + 1;
  os << '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    os << format_number(traj.times[k]);
    for (double x : traj.states[k]) os << ',' << format_number(x);
    os << '\n';
  }
  return os.str();
}

std::string feedback_csv(const std::vector<RampFeedback>& ramps) {
  std::ostringstream os;
  os << "control_index,b0,b1,b2,b3,low,nominal,high\n";
  for (const auto& r : ramps) {
    os << r.control_index + 1 << ',' << format_number(r.b0) << ','
       << format_number(r.b1) << ',' << format_number(r.b2) << ','
       << format_number(r.b3) << ',' << format_number(r.at_lower) << ','
       << format_number(r.nominal) << ',' << format_number(r.at_upper) << '\n';
  }
  return os.str();
}

std::string mask_csv(const SweepResult& sweep) {
  std::ostringstream os;
  os << "x,y,sos\n";
  for (const auto& c : sweep.cells)
    os << format_number(c.x) << ',' << format_number(c.y) << ','
       << (c.sos ? 1 : 0) << '\n';
  return os.str();
}

std::string polyline_csv(const SweepResult& sweep) {
  std::ostringstream os;
  os << "segment_id,x,y\n";
  for (std::size_t s = 0; s < sweep.boundary.size(); ++s)
    for (const auto& p : sweep.boundary[s].points)
      os << s << ',' << format_number(p.x) << ',' << format_number(p.y) << '\n';
  return os.str();
}

std::string margins_csv(const Verdict& verdict) {
  std::ostringstream os;
  os << "condition,value\n";
  for (const auto& m : verdict.margins)
    os << m.id << ',' << format_number(m.value) << '\n';
  return os.str();
}

}  // namespace glvsos
