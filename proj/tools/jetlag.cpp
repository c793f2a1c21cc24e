// jetlag: jet-geometry reports and simulations for the starfish/coral model
// and expression-defined vector fields.

#include "jetlag/cli/commands.hpp"
#include "jetlag/cli/config.hpp"
#include "jetlag/cli/log.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace jetlag;
using namespace jetlag::cli;

namespace {

std::optional<OutputFormat> parse_format(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s == "json" ? OutputFormat::Json : OutputFormat::Csv;
}

template <typename T>
std::optional<T> opt(const CLI::Option* o, const T& v) {
  return o->count() ? std::optional<T>(v) : std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"Jet-space geometry of population vector fields"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  std::string config_path, at, y0, out, format;
  unsigned jobs = 1;
  std::uint64_t seed = 0;
  std::size_t count = 0;

  auto* geometry = app.add_subcommand("geometry", "Report J, N, torsion, F and EYM at a point (JSON)");
  geometry->add_option("--config", config_path, "Config file, or - for stdin")->required();
  auto* at_opt = geometry->add_option("--at", at, "Point as comma-separated coordinates (default: initial_state)");
  auto* geo_out = geometry->add_option("--out", out, "Output file (default: stdout)");

  auto* simulate = app.add_subcommand("simulate", "Integrate the first-order system; write the trajectory");
  simulate->add_option("--config", config_path, "Config file, or - for stdin")->required();
  auto* sim_out = simulate->add_option("--out", out, "Output file, or - for stdout");
  simulate->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* geodyn = app.add_subcommand("geodynamics", "Integrate the second-order Euler-Lagrange system");
  geodyn->add_option("--config", config_path, "Config file, or - for stdin")->required();
  auto* gd_out = geodyn->add_option("--out", out, "Output file, or - for stdout");
  geodyn->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  auto* y0_opt = geodyn->add_option("--y0", y0, "Initial velocity (default: config y0, else X(x0))");

  auto* sweep = app.add_subcommand("sweep", "Integrate every cell of a parameter grid; write a summary CSV");
  sweep->add_option("--config", config_path, "Config file, or - for stdin")->required();
  auto* sw_out = sweep->add_option("--out", out, "Output file, or - for stdout");
  sweep->add_option("--jobs", jobs, "Worker threads (0: one per core)");

  auto* check = app.add_subcommand("check", "Run the self-check suites on seeded random samples");
  check->add_option("--seed", seed, "Seed")->required();
  check->add_option("--count", count, "Samples per suite (>= 1)")->required()->check(CLI::Validator(
      [](const std::string& s) { return s == "0" ? std::string("count must be at least 1") : std::string(); },
      "COUNT>=1"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  return run_guarded([&]() -> int {
    if (check->parsed()) return cmd_check(seed, count);
    const RunConfig config = load_config(config_path);
    if (geometry->parsed())
      return cmd_geometry(config, at_opt->count() ? std::optional(parse_point(at)) : std::nullopt, opt(geo_out, out));
    if (simulate->parsed()) return cmd_simulate(config, {opt(sim_out, out), parse_format(format)});
    if (geodyn->parsed())
      return cmd_geodynamics(config, {opt(gd_out, out), parse_format(format)},
                             y0_opt->count() ? std::optional(parse_point(y0)) : std::nullopt);
    if (sweep->parsed()) return cmd_sweep(config, opt(sw_out, out), jobs);
    return kExitConfig;
  });
}
