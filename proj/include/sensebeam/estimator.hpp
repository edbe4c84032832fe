#ifndef SENSEBEAM_ESTIMATOR_HPP
#define SENSEBEAM_ESTIMATOR_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "sensebeam/channel.hpp"

namespace sensebeam {

/// BS-side channel knowledge. Only the LoS channel of the most recent sensed
/// slot is ever cached; the full channel is never observable.
struct EstimatorState {
  ComplexVector h_old;
  std::optional<std::int64_t> last_sense_slot;
  std::int64_t age = 0;

  bool bootstrapped() const { return last_sense_slot.has_value(); }
};

/// Channel the BS can beamform on: the fresh LoS channel when sensing,
/// otherwise the cached one.
inline const ComplexVector& available_channel(const EstimatorState& state, bool x,
                                              const ComplexVector& h_los_now) {
  if (x) return h_los_now;
  if (!state.bootstrapped()) throw std::logic_error("no cached channel");
  return state.h_old;
}

inline EstimatorState commit(EstimatorState state, bool x, const ComplexVector& h_los_now,
                             std::int64_t slot) {
  if (x) {
    state.h_old = h_los_now;
    state.last_sense_slot = slot;
    state.age = 0;
  } else if (state.bootstrapped()) {
    ++state.age;
  }
  // x = 0 before any sense leaves the state at "never"; callers must not
  // skip slot 0.
  return state;
}

}  // namespace sensebeam

#endif  // SENSEBEAM_ESTIMATOR_HPP
