#ifndef SENSEBEAM_CHANNEL_HPP
#define SENSEBEAM_CHANNEL_HPP

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "sensebeam/rng.hpp"
#include "sensebeam/trace.hpp"

namespace sensebeam {

template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

using ComplexVector = CVector<double>;

/// NLoS path-gain magnitudes, relative to the unit LoS gain.
inline constexpr std::array<double, 5> kNlosGainLevels{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};

enum class NlosMode { per_episode, per_slot };

NlosMode parse_nlos_mode(const std::string& name);
const char* to_string(NlosMode mode);

/// Half-wavelength ULA response: entry k is exp(j k pi sin(theta)) / sqrt(N).
template <typename Scalar = double>
CVector<Scalar> steering_vector(Scalar theta, Eigen::Index n_antennas) {
  if (n_antennas < 1) throw std::invalid_argument("steering_vector: n_antennas must be >= 1");
  const Scalar phase = std::numbers::pi_v<Scalar> * std::sin(theta);
  const Scalar scale = Scalar(1) / std::sqrt(static_cast<Scalar>(n_antennas));
  CVector<Scalar> a(n_antennas);
  for (Eigen::Index k = 0; k < n_antennas; ++k)
    a[k] = std::polar(scale, static_cast<Scalar>(k) * phase);
  return a;
}

/// Multipath angles of departure and complex gains. Index 0 is the LoS path
/// (gain exactly 1); indices 1.. are NLoS.
struct PathSet {
  std::vector<double> aod;
  std::vector<std::complex<double>> gain;

  std::size_t size() const { return aod.size(); }
};

struct ChannelRealization {
  ComplexVector h_los;
  ComplexVector h_nlos;
  ComplexVector h;
  PathSet paths;
};

/// LoS angle of departure relative to array broadside, wrapped to (-pi, pi].
/// Throws std::domain_error ("undefined azimuth") when the UE is horizontally
/// coincident with the BS.
double azimuth_from_position(const PositionSample& p, const BsGeometry& geom);

/// Random NLoS paths: AoD uniform on (-pi, pi], magnitude uniform over
/// kNlosGainLevels, phase uniform on [0, 2pi). Deterministic given the seed.
PathSet gen_nlos_paths(std::size_t count, std::uint64_t rng_seed);

/// Sum of gain-weighted steering vectors over a path set.
ComplexVector synthesize(const PathSet& paths, Eigen::Index n_antennas);

struct ChannelConfig {
  Eigen::Index n_antennas = 6;
  std::size_t l_nlos = 5;
  NlosMode nlos_mode = NlosMode::per_episode;
};

/// True channel for one slot. In per_episode mode the NLoS paths depend on the
/// seed only; in per_slot mode the seed is mixed with the slot index.
ChannelRealization gen_channel(const PositionSample& p, const BsGeometry& geom,
                               const ChannelConfig& cfg, std::uint64_t rng_seed);

/// Channels for a whole trace.
std::vector<ChannelRealization> gen_channels(const Trace& trace, const BsGeometry& geom,
                                             const ChannelConfig& cfg, std::uint64_t rng_seed);

void write_channel_csv(std::ostream& out, const std::vector<ChannelRealization>& channels);

}  // namespace sensebeam

#endif  // SENSEBEAM_CHANNEL_HPP
