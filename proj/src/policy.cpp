#include "sensebeam/policy.hpp"

#include <bit>

namespace sensebeam {

ObjectiveMode parse_objective_mode(const std::string& name) {
  if (name == "genie") return ObjectiveMode::genie;
  if (name == "estimate") return ObjectiveMode::estimate;
  throw std::invalid_argument("unknown objective_mode: " + name);
}

MagnitudeMode parse_magnitude_mode(const std::string& name) {
  if (name == "squared") return MagnitudeMode::squared;
  if (name == "absolute") return MagnitudeMode::absolute;
  throw std::invalid_argument("unknown magnitude_mode: " + name);
}

const char* to_string(ObjectiveMode mode) {
  return mode == ObjectiveMode::genie ? "genie" : "estimate";
}

const char* to_string(MagnitudeMode mode) {
  return mode == MagnitudeMode::squared ? "squared" : "absolute";
}

void PolicyConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must be in (0, 1]");
  if (!(p_max > 0.0) || !std::isfinite(p_max)) throw std::invalid_argument("p_max must be > 0");
  if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("v must be >= 0");
}

SlotDecision lyapunov_decide(const ComplexVector& h_true, const ComplexVector& h_los_now,
                             const EstimatorState& est, QueueState q, const PolicyConfig& cfg) {
  SlotDecision d;
  ComplexVector w1 = mrt(available_channel(est, true, h_los_now), cfg.p_max);
  const ComplexVector& h_eval1 =
      cfg.objective_mode == ObjectiveMode::genie ? h_true : h_los_now;
  d.obj_sense = slot_objective(h_eval1, w1, true, q, cfg);

  if (!est.bootstrapped()) {
    d.x = true;
    d.w = std::move(w1);
    return d;
  }

  const ComplexVector& h_avail0 = available_channel(est, false, h_los_now);
  ComplexVector w0 = mrt(h_avail0, cfg.p_max);
  const ComplexVector& h_eval0 = cfg.objective_mode == ObjectiveMode::genie ? h_true : h_avail0;
  d.obj_skip = slot_objective(h_eval0, w0, false, q, cfg);

  d.x = d.obj_sense >= d.obj_skip;
  d.w = d.x ? std::move(w1) : std::move(w0);
  return d;
}

OfflineOptimum brute_force_offline(const std::vector<ChannelRealization>& channels,
                                   std::size_t horizon, const PolicyConfig& cfg,
                                   double noise_power) {
  if (horizon > kMaxOracleHorizon)
    throw std::invalid_argument("horizon too large (max " + std::to_string(kMaxOracleHorizon) + ")");
  if (horizon == 0) throw std::invalid_argument("horizon must be >= 1");
  if (channels.size() < horizon) throw std::invalid_argument("fewer channels than horizon");
  if (!(noise_power > 0.0)) throw std::invalid_argument("noise_power must be > 0");
  cfg.validate();

  const std::size_t budget =
      static_cast<std::size_t>(std::floor(cfg.alpha * static_cast<double>(horizon) + 1e-9));

  // snr[t][s]: SNR at slot t when beamforming on the LoS channel sensed at s <= t.
  std::vector<std::vector<double>> snr(horizon);
  for (std::size_t s = 0; s < horizon; ++s) {
    const ComplexVector w = mrt(channels[s].h_los, cfg.p_max);
    for (std::size_t t = s; t < horizon; ++t) {
      snr[t].resize(horizon);
      snr[t][s] = beam_power(channels[t].h, w) / noise_power;
    }
  }

  OfflineOptimum best;
  best.best_avg_snr = -1.0;
  std::uint32_t best_mask = 0;
  const std::uint32_t n_masks = 1U << (horizon - 1);
  for (std::uint32_t mask = 0; mask < n_masks; ++mask) {
    if (1U + static_cast<std::size_t>(std::popcount(mask)) > budget) continue;
    double total = snr[0][0];
    std::size_t last = 0;
    for (std::size_t t = 1; t < horizon; ++t) {
      if (mask & (1U << (t - 1))) last = t;
      total += snr[t][last];
    }
    const double avg = total / static_cast<double>(horizon);
    if (avg > best.best_avg_snr) {
      best.best_avg_snr = avg;
      best_mask = mask;
    }
  }
  if (best.best_avg_snr < 0.0) throw std::invalid_argument("alpha * horizon < 1: no feasible sequence");

  best.best_sequence.assign(horizon, 0);
  best.best_sequence[0] = 1;
  for (std::size_t t = 1; t < horizon; ++t)
    best.best_sequence[t] = (best_mask >> (t - 1)) & 1U;
  return best;
}

}  // namespace sensebeam
