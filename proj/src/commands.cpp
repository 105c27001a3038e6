#include "glvsos/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace glvsos {
namespace {

namespace fs = std::filesystem;

struct Problem {
  Floors floors;
  ModelConfig model;
  RectangularSet rect;
};

Problem load_problem(const Json& config) {
  Floors floors = parse_floors(config);
  ModelConfig model = parse_model(config, floors);
  RectangularSet rect = parse_set(config, model.params.species());
  return Problem{floors, std::move(model), std::move(rect)};
}

void write_artifact(const CommandOptions& options, const std::string& name,
                    const std::string& content) {
  if (options.out_dir.empty()) return;
  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  const fs::path path = fs::path(options.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
}

std::string choice(const Json& config, const std::string& key,
                   const std::string& fallback,
                   std::initializer_list<const char*> allowed) {
  const std::string value = get_string(config, key, fallback);
  for (const char* a : allowed)
    if (value == a) return value;
  std::string msg = "config key '" + key + "' must be one of";
  for (const char* a : allowed) msg += std::string(" ") + a;
  throw ConfigError(msg);
}

std::size_t resolution_at(const Json& config, const std::string& key,
                          std::size_t fallback) {
  const std::size_t res = get_count(config, key, fallback);
  if (res < 2) throw ConfigError("config key '" + key + "' must be >= 2");
  return res;
}

double positive_at(const Json& config, const std::string& key, double fallback) {
  const double v = get_number(config, key, fallback);
  if (!(v > 0.0) || !std::isfinite(v))
    throw ConfigError("config key '" + key + "' must be positive");
  return v;
}

Json vec(std::span<const double> v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

CommandResult finish(Json report, bool decision, const CommandOptions& options,
                     const std::string& csv) {
  CommandResult out;
  out.text = options.format == "csv" ? csv : dump_json(report) + "\n";
  out.report = std::move(report);
  if (options.strict && !decision) out.exit_code = kExitNegative;
  return out;
}

RampOptions ramp_options(const Json& config) {
  RampOptions opt;
  if (config.contains("feedback")) {
    const Json& fb = config.at("feedback");
    opt.nominal = get_number(fb, "nominal", opt.nominal);
    opt.band_width = get_number(fb, "band", opt.band_width);
  }
  return opt;
}

struct SizosOutcome {
  Verdict closed;
  std::optional<MayLeonardSizos> may_leonard;
};

SizosOutcome sizos_closed_form(const Problem& p, const ForcedGlv& forced) {
  SizosOutcome out{sizos_rect_glv(forced, p.rect, p.floors), std::nullopt};
  const auto bounds = symmetric_bounds(p.rect);
  const auto box = uniform_controls(forced.controls());
  if (p.model.may_leonard && bounds && box)
    out.may_leonard = may_leonard_sizos_condition(
        p.model.may_leonard->alpha, p.model.may_leonard->beta, bounds->nl,
        bounds->nu, box->first, box->second, p.floors);
  return out;
}

double linf_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NumericalFailure*>(&e)) return kExitNumerical;
  return kExitConfig;
}

CommandResult check_sos(const Json& config, const CommandOptions& options) {
  const Problem p = load_problem(config);
  const std::string method =
      choice(config, "method", "closed_form", {"closed_form", "sampled", "both"});
  const std::size_t res = resolution_at(config, "resolution", 41);

  std::optional<Verdict> closed, sampled;
  if (method != "sampled") closed = sos_rect_glv(p.model.params, p.rect, p.floors);
  if (method != "closed_form") {
    p.rect.require_population(p.floors);
    sampled = sos_rect_sampled(as_field(p.model.params), p.rect, res);
  }
  const bool decision = closed ? closed->decision : sampled->decision;

  Json report;
  report["command"] = "check-sos";
  report["decision"] = decision;
  report["method"] = method;
  report["model"] = to_json(p.model.params);
  report["set"] = to_json(p.rect);
  if (closed) report["closed_form"] = to_json(*closed);
  if (sampled) report["sampled"] = to_json(*sampled);
  if (closed && sampled) report["methods_agree"] = closed->decision == sampled->decision;
  if (const auto b = symmetric_bounds(p.rect); p.model.may_leonard && b)
    report["may_leonard"] = to_json(may_leonard_sos_condition(
        p.model.may_leonard->alpha, p.model.may_leonard->beta, b->nl, b->nu,
        p.floors));
  std::optional<OutwardWitness> witness;
  if (!decision) witness = find_outward_witness(p.model.params, p.rect, res);
  report["witness"] = witness ? to_json(*witness) : Json(nullptr);

  write_artifact(options, "check_sos.json", dump_json(report) + "\n");
  return finish(std::move(report), decision, options,
                margins_csv(closed ? *closed : *sampled));
}

CommandResult check_sizos(const Json& config, const CommandOptions& options) {
  const Problem p = load_problem(config);
  const ForcedGlv forced(p.model.params,
                         parse_controls(config, p.model.params.species()));
  const std::string method =
      choice(config, "method", "closed_form", {"closed_form", "minimax", "both"});

  const SizosOutcome cf = sizos_closed_form(p, forced);
  std::optional<MinimaxResult> mm;
  if (method != "closed_form") {
    p.rect.require_population(p.floors);
    mm = minimax_margin(as_controlled_field(forced), p.rect, forced.controls(),
                        resolution_at(config, "resolution", 21),
                        resolution_at(config, "control_resolution", 21));
  }
  const bool decision =
      method == "minimax" ? mm->margin <= kSampledTolerance : cf.closed.decision;

  Json report;
  report["command"] = "check-sizos";
  report["decision"] = decision;
  report["method"] = method;
  report["model"] = to_json(p.model.params);
  report["set"] = to_json(p.rect);
  report["controls"] = to_json(forced.controls());
  report["closed_form"] = to_json(cf.closed);
  if (cf.may_leonard) {
    Json ml = to_json(cf.may_leonard->verdict);
    ml["au_min"] = cf.may_leonard->au_min;
    ml["al_max"] = cf.may_leonard->al_max;
    report["may_leonard"] = std::move(ml);
    report["thresholds"] = Json{{"au_min", cf.may_leonard->au_min},
                                {"al_max", cf.may_leonard->al_max}};
  }
  if (mm) {
    report["minimax"] = to_json(*mm, kSampledTolerance);
    report["methods_agree"] = (mm->margin <= kSampledTolerance) == cf.closed.decision;
  }

  write_artifact(options, "check_sizos.json", dump_json(report) + "\n");
  return finish(std::move(report), decision, options, margins_csv(cf.closed));
}

CommandResult synthesize(const Json& config, const CommandOptions& options) {
  const Problem p = load_problem(config);
  const ForcedGlv forced(p.model.params,
                         parse_controls(config, p.model.params.species()));
  const SizosOutcome cf = sizos_closed_form(p, forced);

  Json report;
  report["command"] = "synthesize";
  report["decision"] = cf.closed.decision;
  report["set"] = to_json(p.rect);
  report["controls"] = to_json(forced.controls());
  report["closed_form"] = to_json(cf.closed);
  std::vector<RampFeedback> ramps;
  if (cf.closed.decision) {
    const RampOptions ro = ramp_options(config);
    ramps = synthesize_ramp_feedback(forced, p.rect, ro, p.floors);
    report["band"] = ro.band_width;
    Json arr = Json::array();
    for (const auto& r : ramps) arr.push_back(to_json(r));
    report["feedback"] = std::move(arr);
    write_artifact(options, "feedback.csv", feedback_csv(ramps));
  } else {
    report["feedback"] = nullptr;
  }
  write_artifact(options, "synthesize.json", dump_json(report) + "\n");
  return finish(std::move(report), cf.closed.decision, options,
                feedback_csv(ramps));
}

CommandResult simulate(const Json& config, const CommandOptions& options) {
  const Problem p = load_problem(config);
  const double t_end = positive_at(config, "t_end", 100.0);
  const IntegrateOptions iopt = parse_integrator(config);
  const bool closed_loop = get_bool(config, "closed_loop", false);
  const double window_start = get_number(config, "late_window_start", 0.8 * t_end);
  p.rect.require_population(p.floors);

  Json report;
  report["command"] = "simulate";
  report["closed_loop"] = closed_loop;
  report["t_end"] = t_end;
  report["set"] = to_json(p.rect);

  VectorField field;
  if (closed_loop) {
    const ForcedGlv forced(p.model.params,
                           parse_controls(config, p.model.params.species()));
    const auto ramps =
        synthesize_ramp_feedback(forced, p.rect, ramp_options(config), p.floors);
    write_artifact(options, "feedback.csv", feedback_csv(ramps));
    Json arr = Json::array();
    for (const auto& r : ramps) arr.push_back(to_json(r));
    report["feedback"] = std::move(arr);
    field = close_loop(forced, ramps);
  } else {
    field = as_field(p.model.params);
  }

  std::optional<Vector> target;
  if (p.model.may_leonard)
    target = may_leonard_coexistence(p.model.may_leonard->alpha,
                                     p.model.may_leonard->beta);
  if (target) report["coexistence"] = vec(*target);
  report["late_window_start"] = window_start;

  const auto runs = vertex_suite(field, p.rect, t_end, iopt);
  bool all_contained = true;
  bool failed = false;
  std::size_t exits = 0;
  Json runs_json = Json::array();
  std::ostringstream table;
  table << "run,status,contained,first_exit_time,exit_axis,exit_side,"
           "max_excursion\n";
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const VertexRun& run = runs[k];
    Json j;
    j["run"] = k + 1;
    j["vertex"] = vec(run.vertex);
    j["status"] = to_string(run.trajectory.status);
    j["accepted_steps"] = run.trajectory.accepted_steps;
    j["rejected_steps"] = run.trajectory.rejected_steps;
    const Json containment = to_json(run.report);
    for (const auto& [key, value] : containment.items()) j[key] = value;
    j["final_state"] = vec(run.trajectory.final_state());
    if (target) {
      double late = std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < run.trajectory.size(); ++s)
        if (run.trajectory.times[s] >= window_start)
          late = std::min(late, linf_distance(run.trajectory.states[s], *target));
      j["late_window_min_distance"] = late;
      j["final_distance"] = linf_distance(run.trajectory.final_state(), *target);
    }
    char name[32];
    std::snprintf(name, sizeof name, "trajectory_%02zu", k + 1);
    j["csv"] = std::string(name) + ".csv";
    write_artifact(options, std::string(name) + ".csv", trajectory_csv(run.trajectory));
    write_artifact(options, std::string(name) + ".json", dump_json(j) + "\n");

    all_contained = all_contained && run.report.contained;
    if (run.report.first_exit) ++exits;
    failed = failed || run.trajectory.status == TrajectoryStatus::step_failure;
    const auto& ex = run.report.first_exit;
    table << k + 1 << ',' << to_string(run.trajectory.status) << ','
          << (run.report.contained ? 1 : 0) << ','
          << (ex ? format_number(ex->time) : "") << ','
          << (ex ? std::to_string(ex->axis + 1) : "") << ','
          << (ex ? to_string(ex->side) : "") << ','
          << format_number(run.report.max_excursion) << '\n';
    runs_json.push_back(std::move(j));
  }
  report["decision"] = all_contained;
  report["all_contained"] = all_contained;
  report["exits"] = exits;
  report["runs"] = std::move(runs_json);

  write_artifact(options, "simulate.json", dump_json(report) + "\n");
  CommandResult out = finish(std::move(report), all_contained, options, table.str());
  if (failed) out.exit_code = kExitNumerical;
  return out;
}

CommandResult sweep(const std::string& kind, const Json& config,
                    const CommandOptions& options) {
  const Floors floors = parse_floors(config);
  const std::size_t res = resolution_at(config, "resolution", 201);
  const Json window_cfg = config.contains("window") ? config.at("window") : Json::object();
  Json report;
  report["command"] = "sweep " + kind;
  SweepResult result;

  try {
    if (kind == "bounds") {
      double alpha = 0.0, beta = 0.0;
      if (config.contains("may_leonard")) {
        alpha = get_number(config.at("may_leonard"), "alpha", 0.0);
        beta = get_number(config.at("may_leonard"), "beta", 0.0);
      }
      alpha = get_number(config, "alpha", alpha);
      beta = get_number(config, "beta", beta);
      if (!config.contains("alpha") && !config.contains("may_leonard"))
        throw ConfigError("config is missing key 'alpha'");
      if (!config.contains("beta") && !config.contains("may_leonard"))
        throw ConfigError("config is missing key 'beta'");
      SweepWindow w{get_number(window_cfg, "x_min", 0.01),
                    get_number(window_cfg, "x_max", 2.0),
                    get_number(window_cfg, "y_min", 0.01),
                    get_number(window_cfg, "y_max", 4.0), res, res};
      result = sweep_population_bounds(alpha, beta, w, floors);
      report["alpha"] = alpha;
      report["beta"] = beta;
      report["axes"] = Json::array({"nl", "nu"});
      const auto tri = triangle_vertices(alpha, beta);
      if (tri) {
        Json verts = Json::array();
        for (const auto& v : *tri) verts.push_back(Json::array({v.x, v.y}));
        report["vertices"] = std::move(verts);
      } else {
        report["vertices"] = nullptr;
      }
    } else if (kind == "coeffs") {
      double nl = 0.0, nu = 0.0;
      if (config.contains("set")) {
        nl = get_number(config.at("set"), "nl", 0.0);
        nu = get_number(config.at("set"), "nu", 0.0);
      }
      nl = get_number(config, "nl", nl);
      nu = get_number(config, "nu", nu);
      if (!config.contains("nl") && !config.contains("set"))
        throw ConfigError("config is missing key 'nl'");
      if (!config.contains("nu") && !config.contains("set"))
        throw ConfigError("config is missing key 'nu'");
      const double e = floors.coefficient;
      SweepWindow w{get_number(window_cfg, "x_min", e),
                    get_number(window_cfg, "x_max", 1.0),
                    get_number(window_cfg, "y_min", e),
                    get_number(window_cfg, "y_max", 1.0), res, res};
      result = sweep_competition_coeffs(nl, nu, w, floors);
      report["nl"] = nl;
      report["nu"] = nu;
      report["axes"] = Json::array({"alpha", "beta"});
    } else {
      throw ConfigError("sweep kind must be 'bounds' or 'coeffs'");
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("sweep: ") + e.what());
  }

  report["empty"] = result.empty;
  report["decision"] = !result.empty;
  report["resolution"] = res;
  report["cells"] = result.cells.size();
  report["sos_cells"] = result.count_sos();
  report["excluded"] = result.excluded;
  Json lines = Json::array();
  for (const auto& pl : result.boundary) {
    Json pts = Json::array();
    for (const auto& pt : pl.points) pts.push_back(Json::array({pt.x, pt.y}));
    lines.push_back(Json{{"name", pl.name}, {"points", std::move(pts)}});
  }
  report["boundary"] = std::move(lines);
  report["notes"] = result.notes;

  write_artifact(options, "mask.csv", mask_csv(result));
  write_artifact(options, "polylines.csv", polyline_csv(result));
  write_artifact(options, "sweep.json", dump_json(report) + "\n");
  // Emptiness is a finding, not a failed decision.
  return finish(std::move(report), true, options, mask_csv(result));
}

Json case_study_config(const std::string& id) {
  if (id == "1a" || id == "1b") {
    const bool a = id == "1a";
    return Json{{"case", id},
                {"may_leonard", {{"alpha", 0.2}, {"beta", 0.05}}},
                {"set", {{"nl", a ? 0.5 : 0.75}, {"nu", a ? 2.0 : 3.25}}},
                {"method", "both"},
                {"resolution", 41},
                {"t_end", 100.0},
                {"integrator", {{"samples", 1000}}}};
  }
  if (id == "2") {
    return Json{{"case", id},
                {"may_leonard", {{"alpha", 0.8}, {"beta", 1.3}}},
                {"set", {{"nl", 0.25}, {"nu", 0.38}}},
                {"method", "both"},
                {"resolution", 41},
                {"t_end", 200.0},
                {"integrator", {{"samples", 2000}}}};
  }
  if (id == "3") {
    return Json{{"case", id},
                {"may_leonard", {{"alpha", 0.8}, {"beta", 1.3}}},
                {"set", {{"nl", 0.25}, {"nu", 0.38}}},
                {"controls", {{"al", 0.808}, {"au", 1.25}}},
                {"method", "both"},
                {"resolution", 21},
                {"control_resolution", 21},
                {"feedback", {{"nominal", 1.0}, {"band", 0.001}}},
                {"closed_loop", true},
                {"t_end", 500.0},
                {"late_window_start", 400.0},
                {"integrator", {{"samples", 5000}, {"record_steps", true}}}};
  }
  throw ConfigError("unknown case study '" + id + "' (expected 1a, 1b, 2 or 3)");
}

CommandResult case_study(const std::string& id, const Json& overrides,
                         const CommandOptions& options) {
  Json config = case_study_config(id);
  if (overrides.is_object())
    for (const auto& [key, value] : overrides.items()) config[key] = value;

  CommandOptions quiet = options;
  quiet.strict = false;
  quiet.format = "json";
  Json report;
  report["command"] = "case-study " + id;
  report["config"] = config;

  bool decision = true;
  int code = kExitOk;
  if (id == "3") {
    const CommandResult check = check_sizos(config, quiet);
    decision = check.report.at("decision").get<bool>();
    report["decision"] = decision;
    report["check"] = check.report;
    Json unit = config;
    unit["controls"] = Json{{"al", 1.0}, {"au", 1.0}};
    unit["method"] = "closed_form";
    CommandOptions none = quiet;
    none.out_dir.clear();
    report["unit_box"] = check_sizos(unit, none).report;
    if (decision) {
      const CommandResult sim = simulate(config, quiet);
      report["simulation"] = sim.report;
      code = std::max(code, sim.exit_code);
    }
  } else {
    const CommandResult check = check_sos(config, quiet);
    decision = check.report.at("decision").get<bool>();
    report["decision"] = decision;
    report["check"] = check.report;
    const CommandResult sim = simulate(config, quiet);
    report["simulation"] = sim.report;
    code = std::max(code, sim.exit_code);
  }

  write_artifact(options, "case_study.json", dump_json(report) + "\n");
  std::string csv;
  if (options.format == "csv") {
    const Json& sim = report.contains("simulation") ? report["simulation"] : Json();
    std::ostringstream os;
    os << "run,contained,first_exit_time,max_excursion\n";
    if (sim.is_object())
      for (const auto& r : sim.at("runs"))
        os << r.at("run").get<std::size_t>() << ','
           << (r.at("contained").get<bool>() ? 1 : 0) << ','
           << (r.at("first_exit_time").is_null()
                   ? std::string()
                   : format_number(r.at("first_exit_time").get<double>()))
           << ',' << format_number(r.at("max_excursion").get<double>()) << '\n';
    csv = os.str();
  }
  CommandResult out = finish(std::move(report), decision, options, csv);
  if (code == kExitNumerical) out.exit_code = kExitNumerical;
  return out;
}

}  // namespace glvsos
