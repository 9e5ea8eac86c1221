// Command line front end: simulate a single run, sweep a protocol grid, or
// validate a config file.
//
//   wsnlife simulate --config cfg.json [--out dir] [--seed N]
//   wsnlife sweep    --config cfg.json [--out dir] [--jobs N]
//   wsnlife validate --config cfg.json
//
// Exit codes: 0 success, 1 validation error, 2 runtime failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wsnlife/wsnlife.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidationError = 1;
constexpr int kRuntimeError = 2;

int simulate(const std::string& config_path, const std::optional<std::string>& out,
             const std::optional<std::uint64_t>& seed) {
  auto spec = wsnlife::parse_config(config_path);
  if (out) spec.output_dir = *out;
  if (seed) spec.base.deployment.seed = *seed;

  const auto& c = spec.base;
  const auto result = wsnlife::run(c);

  std::filesystem::create_directories(spec.output_dir);
  const auto series = spec.output_dir / wsnlife::series_file_name(c.tc, c.tm, c.deployment.seed);
  wsnlife::emit_series(result, series);

  const auto row = wsnlife::summarize(result, c.tc, c.tm, c.deployment.seed, c.max_steps, c.deployment.node_count);
  const auto summary = spec.output_dir / "summary.csv";
  {
    std::ofstream f(summary, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + summary.string() + "'");
    wsnlife::write_summary(f, {row});
  }

  std::cout << "series:   " << series.string() << '\n'
            << "summary:  " << summary.string() << '\n'
            << "steps:    " << result.totals.steps_executed << (result.totals.ended_early ? " (ended early)" : "")
            << '\n'
            << "energy:   " << result.totals.energy_spent << " J\n"
            << "packets:  " << result.totals.packets_delivered << " of " << result.totals.packets_generated
            << " delivered\n"
            << "deaths:   " << result.death_times.size() << '\n'
            << "maint.:   " << result.maintenance_events.size() << " events\n";
  return kOk;
}

int sweep(const std::string& config_path, const std::optional<std::string>& out, unsigned jobs) {
  auto spec = wsnlife::parse_config(config_path);
  if (out) spec.output_dir = *out;
  const auto outputs = wsnlife::run_experiment(spec, jobs);
  std::cout << outputs.series_files.size() << " runs written to " << spec.output_dir.string() << '\n';
  std::ifstream ranking(outputs.ranking_file);
  std::cout << ranking.rdbuf();
  return kOk;
}

int validate(const std::string& config_path) {
  const auto spec = wsnlife::parse_config(config_path);
  for (auto tc : spec.tc_list)
    for (auto tm : spec.tm_list)
      for (auto seed : spec.seeds) wsnlife::config_for(spec, tc, tm, seed).validate();
  std::cout << "config OK: " << spec.base.deployment.node_count << " nodes, " << spec.base.deployment.area.width
            << " x " << spec.base.deployment.area.height << " m, tc=" << wsnlife::to_string(spec.base.tc)
            << ", tm=" << wsnlife::to_string(spec.base.tm) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wireless sensor network lifetime simulator"};
  app.require_subcommand(1);

  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 0;

  auto* sim = app.add_subcommand("simulate", "Run a single simulation");
  sim->add_option("--config", config, "JSON config file")->required();
  sim->add_option("--out", out, "Output directory (overrides experiment.output_dir)");
  sim->add_option("--seed", seed, "Deployment seed (overrides deployment.seed)");

  auto* swp = app.add_subcommand("sweep", "Run every tc x tm x seed combination");
  swp->add_option("--config", config, "JSON config file")->required();
  swp->add_option("--out", out, "Output directory (overrides experiment.output_dir)");
  swp->add_option("--jobs", jobs, "Worker threads (0 = all cores)");

  auto* val = app.add_subcommand("validate", "Check a config file without running it");
  val->add_option("--config", config, "JSON config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidationError;
  }

  try {
    if (sim->parsed()) return simulate(config, out, seed);
    if (swp->parsed()) return sweep(config, out, jobs);
    return validate(config);
  } catch (const wsnlife::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kValidationError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}
