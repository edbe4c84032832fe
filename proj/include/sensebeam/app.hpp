#ifndef SENSEBEAM_APP_HPP
#define SENSEBEAM_APP_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sensebeam/sim.hpp"

namespace sensebeam {

inline constexpr const char* kVersion = "0.1.0";

// Process exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitTrace = 2;
inline constexpr int kExitHorizon = 3;
inline constexpr int kExitIo = 4;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SyntheticTraceSpec {
  SynthKind kind = SynthKind::arc;
  std::size_t slots = 200;
  double speed = 0.1;
  std::uint64_t seed = 0;
  SynthOptions options;
};

struct TraceSettings {
  TraceFormat format = TraceFormat::cartesian_csv;
  double bs_lat = 0.0;
  double bs_lon = 0.0;
  double bs_alt = 0.0;
  double boresight_deg = 0.0;
  GapPolicy gaps = GapPolicy::reject;
  std::optional<SyntheticTraceSpec> synthetic;
};

struct AppConfig {
  SimConfig sim;
  double p_max_db = 5.0;
  std::size_t episodes = 20;
  std::uint64_t seed = 1;
  std::vector<PolicyKind> policies{kAllPolicies.begin(), kAllPolicies.end()};
  TraceSettings trace;
};

/// Parses a config document. A run manifest is accepted too: its "config"
/// member is used. Throws ConfigError.
AppConfig parse_config(const std::string& json_text);
AppConfig load_config(const std::filesystem::path& path);

/// Canonical JSON of the effective configuration (round-trips through
/// parse_config).
std::string config_to_json(const AppConfig& cfg);

/// Sets the seed and derives the channel and policy seeds from it.
void set_seed(AppConfig& cfg, std::uint64_t seed);

struct LoadedTrace {
  Trace trace;
  std::uint64_t checksum = 0;
  std::string source;
};

/// Loads and normalizes the trace named by `path`, or generates the configured
/// synthetic trace when `path` is empty. Throws TraceError.
LoadedTrace resolve_trace(const AppConfig& cfg, const std::optional<std::filesystem::path>& path);

struct CommandOptions {
  std::optional<std::uint64_t> seed;
  unsigned jobs = 0;
};

int cmd_run(const std::filesystem::path& config_path,
            const std::optional<std::filesystem::path>& trace_path,
            const std::filesystem::path& out_dir, const CommandOptions& opts, std::ostream& err);

int cmd_sweep(const std::filesystem::path& config_path,
              const std::optional<std::filesystem::path>& trace_path, const std::string& axis,
              const std::vector<double>& values, const std::filesystem::path& out_dir,
              const CommandOptions& opts, std::ostream& err);

int cmd_oracle(const std::filesystem::path& config_path,
               const std::optional<std::filesystem::path>& trace_path, std::size_t horizon,
               const CommandOptions& opts, std::ostream& out, std::ostream& err);

/// Result of the oracle comparison, exposed for tests.
struct OracleComparison {
  double lyapunov_avg_snr = 0.0;
  double optimal_avg_snr = 0.0;
  double gap_percent = 0.0;
  std::vector<int> lyapunov_sequence;
  std::vector<int> optimal_sequence;
};

OracleComparison compare_with_oracle(const SimConfig& cfg, const Trace& trace, std::size_t horizon);

}  // namespace sensebeam

#endif  // SENSEBEAM_APP_HPP
