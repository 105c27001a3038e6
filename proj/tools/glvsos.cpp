// glvsos: command-line driver for SOS/SIZOS analysis of GLV models.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "glvsos/commands.hpp"

using namespace glvsos;

int main(int argc, char** argv) {
  CLI::App app{"Sustainability and sustainizability over sets for GLV models"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  CommandOptions options;
  std::optional<std::size_t> resolution;
  std::optional<double> t_end;
  std::optional<double> alpha, beta, nl, nu;
  std::string sweep_kind;
  std::string case_id;

  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", options.out_dir, "Directory for CSV/JSON artifacts");
  app.add_option("--format", options.format, "stdout format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--strict", options.strict, "Exit 3 when the decision is false");
  app.add_option("--resolution", resolution, "Grid points per axis");
  app.add_option("--t-end", t_end, "Simulation horizon");

  auto* sos = app.add_subcommand("check-sos", "Decide SOS of a rectangle");
  auto* sizos = app.add_subcommand("check-sizos", "Decide SIZOS of a rectangle");
  auto* synth = app.add_subcommand("synthesize", "Build the ramp feedback law");
  auto* sim = app.add_subcommand("simulate", "Integrate from every vertex");
  auto* sw = app.add_subcommand("sweep", "Classify a parameter grid");
  sw->add_option("kind", sweep_kind, "bounds or coeffs")
      ->required()
      ->check(CLI::IsMember({"bounds", "coeffs"}));
  sw->add_option("--alpha", alpha);
  sw->add_option("--beta", beta);
  sw->add_option("--nl", nl);
  sw->add_option("--nu", nu);
  auto* cs = app.add_subcommand("case-study", "Reproduce a case study");
  cs->add_option("id", case_id, "1a, 1b, 2 or 3")
      ->required()
      ->check(CLI::IsMember({"1a", "1b", "2", "3"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    Json config = Json::object();
    if (!config_path.empty()) {
      config = load_config_file(config_path);
      if (!config.is_object()) throw ConfigError("config must be a JSON object");
    } else if (!cs->parsed() && !sw->parsed()) {
      throw ConfigError("--config is required for this subcommand");
    }
    if (resolution) config["resolution"] = *resolution;
    if (t_end) config["t_end"] = *t_end;
    if (alpha) config["alpha"] = *alpha;
    if (beta) config["beta"] = *beta;
    if (nl) config["nl"] = *nl;
    if (nu) config["nu"] = *nu;

    CommandResult result;
    if (sos->parsed()) result = check_sos(config, options);
    else if (sizos->parsed()) result = check_sizos(config, options);
    else if (synth->parsed()) result = synthesize(config, options);
    else if (sim->parsed()) result = simulate(config, options);
    else if (sw->parsed()) result = sweep(sweep_kind, config, options);
    else result = case_study(case_id, config, options);

    std::cout << result.text;
    std::cout.flush();
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "glvsos: error: " << e.what() << '\n';
    return exit_code_for(e);
  }
}
