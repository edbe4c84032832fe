#ifndef SENSEBEAM_POLICY_HPP
#define SENSEBEAM_POLICY_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "sensebeam/channel.hpp"
#include "sensebeam/estimator.hpp"
#include "sensebeam/rng.hpp"

namespace sensebeam {

/// Whether candidate beams are scored against the true channel (as the
/// simulator can) or against the BS's own available channel.
enum class ObjectiveMode { genie, estimate };

/// Beam reward: |h^H w|^2 (received power) or |h^H w|.
enum class MagnitudeMode { squared, absolute };

ObjectiveMode parse_objective_mode(const std::string& name);
MagnitudeMode parse_magnitude_mode(const std::string& name);
const char* to_string(ObjectiveMode mode);
const char* to_string(MagnitudeMode mode);

/// Virtual queue for the average sensing budget. Units are slots.
struct QueueState {
  double q = 0.0;
};

struct PolicyConfig {
  double v = 1.0;
  double alpha = 0.5;
  double p_max = 3.1622776601683795;  // linear, 5 dB
  ObjectiveMode objective_mode = ObjectiveMode::genie;
  MagnitudeMode magnitude_mode = MagnitudeMode::squared;

  void validate() const;
};

struct SlotDecision {
  bool x = true;
  ComplexVector w;
  double obj_sense = 0.0;
  double obj_skip = -std::numeric_limits<double>::infinity();
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Q' = max(Q + x - alpha, 0).
inline QueueState queue_update(QueueState q, bool x, double alpha) {
  return {std::max(q.q + (x ? 1.0 : 0.0) - alpha, 0.0)};
}

/// |h^H w|^2.
template <typename DerivedH, typename DerivedW>
typename DerivedH::RealScalar beam_power(const Eigen::MatrixBase<DerivedH>& h,
                                         const Eigen::MatrixBase<DerivedW>& w) {
  return std::norm(h.dot(w));  // Eigen's dot conjugates the left operand
}

/// Matched-filter beamformer at full power: sqrt(p_max) * h / ||h||.
template <typename Derived>
CVector<typename Derived::RealScalar> mrt(const Eigen::MatrixBase<Derived>& h,
                                          typename Derived::RealScalar p_max) {
  using Real = typename Derived::RealScalar;
  const Real norm = h.norm();
  if (!(norm > Real(0))) throw std::domain_error("degenerate channel");
  return (std::sqrt(p_max) / norm) * h;
}

/// Upper-bound beam: MRT on the full true channel.
template <typename Derived>
CVector<typename Derived::RealScalar> perfect_csi_beam(const Eigen::MatrixBase<Derived>& h_true,
                                                       typename Derived::RealScalar p_max) {
  return mrt(h_true, p_max);
}

/// V * reward(h_eval, w) - Q * x.
template <typename DerivedH, typename DerivedW>
double slot_objective(const Eigen::MatrixBase<DerivedH>& h_eval,
                      const Eigen::MatrixBase<DerivedW>& w, bool x, QueueState q,
                      const PolicyConfig& cfg) {
  const double power = beam_power(h_eval, w);
  const double reward = cfg.magnitude_mode == MagnitudeMode::squared ? power : std::sqrt(power);
  return cfg.v * reward - (x ? q.q : 0.0);
}

/// Drift-plus-penalty decision for one slot: build the sensing and skipping
/// candidates, score both, sense iff obj_sense >= obj_skip. Before the first
/// sense there is no skip candidate and the slot senses unconditionally.
SlotDecision lyapunov_decide(const ComplexVector& h_true, const ComplexVector& h_los_now,
                             const EstimatorState& est, QueueState q, const PolicyConfig& cfg);

/// Senses iff the mean of past decisions (0 when there are none) is <= alpha.
inline bool greedy_decide(double history_avg, double alpha) { return history_avg <= alpha; }

/// Bernoulli(alpha) draw keyed on (seed, slot).
inline bool random_decide(double alpha, std::uint64_t rng_seed, std::int64_t slot) {
  return to_unit_interval(mix_seed(rng_seed, static_cast<std::uint64_t>(slot))) < alpha;
}

struct OfflineOptimum {
  std::vector<int> best_sequence;
  double best_avg_snr = 0.0;
};

inline constexpr std::size_t kMaxOracleHorizon = 16;

/// Exhaustive search over every sensing sequence with x(0) = 1 and
/// sum(x) <= alpha * T, replaying the stale-LoS estimator with MRT beams.
/// Returns the earliest sequence (in binary order) attaining the maximum.
OfflineOptimum brute_force_offline(const std::vector<ChannelRealization>& channels,
                                   std::size_t horizon, const PolicyConfig& cfg,
                                   double noise_power = 1.0);

}  // namespace sensebeam

#endif  // SENSEBEAM_POLICY_HPP
