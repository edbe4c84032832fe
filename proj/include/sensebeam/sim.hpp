#ifndef SENSEBEAM_SIM_HPP
#define SENSEBEAM_SIM_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sensebeam/channel.hpp"
#include "sensebeam/policy.hpp"
#include "sensebeam/trace.hpp"

namespace sensebeam {

enum class PolicyKind { lyapunov, greedy, random, always, never, perfect_csi };

inline constexpr std::array<PolicyKind, 6> kAllPolicies{
    PolicyKind::lyapunov, PolicyKind::greedy, PolicyKind::random,
    PolicyKind::always,   PolicyKind::never,  PolicyKind::perfect_csi};

PolicyKind parse_policy_kind(const std::string& name);
const char* to_string(PolicyKind kind);

/// Policies whose sensing rate is meaningful (all but perfect_csi).
constexpr bool senses(PolicyKind kind) { return kind != PolicyKind::perfect_csi; }

struct SimConfig {
  ChannelConfig channel;
  double noise_power = 1.0;
  PolicyConfig policy;
  PolicyKind policy_kind = PolicyKind::lyapunov;
  BsGeometry geometry;
  std::uint64_t channel_seed = 1;
  std::uint64_t policy_seed = 2;

  void validate() const;
};

struct SlotRecord {
  std::int64_t slot = 0;
  bool x = false;
  double snr = 0.0;       // |h^H w|^2 / noise_power, against the true channel
  double q_after = 0.0;
  double aod_error = 0.0;  // |LoS AoD now - LoS AoD at the cached sense| [rad]
};

struct EpisodeMetrics {
  double avg_snr = 0.0;
  double avg_snr_db = 0.0;
  std::optional<double> sensing_rate;  // empty for perfect_csi
  double final_queue = 0.0;
  std::vector<SlotRecord> per_slot;

  std::size_t slots() const { return per_slot.size(); }
};

/// One episode over a normalized trace. Per slot: generate channel, decide
/// (x, w), score SNR on the true channel, commit the estimator, update the
/// virtual queue. Sensing policies sense at slot 0; `never` is handed the
/// slot-0 LoS channel without it counting as a sense.
EpisodeMetrics run_episode(const SimConfig& cfg, const Trace& trace);

/// Same loop over precomputed channels (used by the oracle comparison).
EpisodeMetrics run_episode(const SimConfig& cfg, const std::vector<ChannelRealization>& channels);

enum class SweepAxis { alpha, p_max_db, v };

SweepAxis parse_sweep_axis(const std::string& name);
const char* to_string(SweepAxis axis);

/// Writes `value` into the field of `cfg` selected by `axis` (P_max in dB).
void apply_axis(SimConfig& cfg, SweepAxis axis, double value);

struct SweepRow {
  double value = 0.0;
  PolicyKind policy = PolicyKind::lyapunov;
  double avg_snr = 0.0;          // mean over episodes of the episode average
  double avg_snr_db = 0.0;       // of avg_snr
  double avg_snr_stderr = 0.0;   // standard error across episodes
  std::optional<double> sensing_rate;
  double final_queue = 0.0;
  std::size_t slots = 0;
};

struct SweepSpec {
  SweepAxis axis = SweepAxis::alpha;
  std::vector<double> values;
  std::size_t episodes = 20;
  std::vector<PolicyKind> policies{kAllPolicies.begin(), kAllPolicies.end()};
  unsigned jobs = 0;  // 0: hardware concurrency
};

/// Runs every (value, policy, episode) cell. Episode k uses channel and policy
/// seeds base + k * kEpisodeSeedStride, shared across values and policies.
/// Rows are ordered by value, then by the order of `spec.policies`.
std::vector<SweepRow> sweep(const SimConfig& tmpl, const Trace& trace, const SweepSpec& spec);

void write_per_slot_csv(std::ostream& out, const EpisodeMetrics& m);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace sensebeam

#endif  // SENSEBEAM_SIM_HPP
