#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "sensebeam/app.hpp"

namespace fs = std::filesystem;
using namespace sensebeam;

int main(int argc, char** argv) {
  CLI::App app{"Constrained sensing-aided beamforming simulator"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string trace_path;
  std::string out_dir = "out";
  std::string axis = "alpha";
  std::vector<double> values;
  std::size_t horizon = 12;
  unsigned jobs = 0;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Configuration JSON (or a run manifest)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--trace", trace_path, "Position trace CSV");
    sub->add_option("--seed", seed, "Override the configured seed");
  };

  auto* run = app.add_subcommand("run", "Run one episode");
  add_common(run);
  run->add_option("--out", out_dir, "Output directory");

  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one parameter across all policies");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--out", out_dir, "Output directory");
  sweep_cmd->add_option("--axis", axis, "alpha | p_max (dB) | v")
      ->check(CLI::IsMember({"alpha", "p_max", "v"}));
  sweep_cmd->add_option("--values", values, "Comma-separated axis values")
      ->required()
      ->delimiter(',');
  sweep_cmd->add_option("--jobs", jobs, "Worker threads (0: all processors)");

  auto* oracle = app.add_subcommand("oracle", "Compare against the offline optimum");
  add_common(oracle);
  oracle->add_option("--horizon", horizon, "Slots to enumerate (<= 16)");

  std::string synth_kind = "arc";
  std::size_t synth_slots = 200;
  double synth_speed = 0.1;
  std::uint64_t synth_seed = 0;
  SynthOptions synth_opts;
  auto* synth = app.add_subcommand("synth", "Write a synthetic cartesian trace CSV");
  synth->add_option("--kind", synth_kind)->check(CLI::IsMember({"linear", "random_walk", "arc"}));
  synth->add_option("--slots", synth_slots);
  synth->add_option("--speed", synth_speed, "meters per slot");
  synth->add_option("--radius", synth_opts.radius, "start range / arc radius [m]");
  synth->add_option("--seed", synth_seed);
  synth->add_option("--out", out_dir, "Output file")->required();

  CLI11_PARSE(app, argc, argv);

  const std::optional<fs::path> trace =
      trace_path.empty() ? std::nullopt : std::optional<fs::path>(trace_path);
  const CommandOptions opts{seed, jobs};

  if (run->parsed()) return cmd_run(config_path, trace, out_dir, opts, std::cerr);
  if (sweep_cmd->parsed())
    return cmd_sweep(config_path, trace, axis, values, out_dir, opts, std::cerr);
  if (oracle->parsed()) return cmd_oracle(config_path, trace, horizon, opts, std::cout, std::cerr);
  if (synth->parsed()) {
    try {
      const Trace t = synth_trace(parse_synth_kind(synth_kind), synth_slots, synth_speed,
                                  synth_seed, synth_opts);
      std::ofstream out(out_dir);
      write_trace_csv(out, t);
      if (!out) throw std::ios_base::failure("cannot write " + out_dir);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitIo;
    }
  }
  return kExitOk;
}
