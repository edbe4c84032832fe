#include "sensebeam/channel.hpp"

#include <ostream>

#include "sensebeam/format.hpp"

namespace sensebeam {

NlosMode parse_nlos_mode(const std::string& name) {
  if (name == "per_episode") return NlosMode::per_episode;
  if (name == "per_slot") return NlosMode::per_slot;
  throw std::invalid_argument("unknown nlos_mode: " + name);
}

const char* to_string(NlosMode mode) {
  return mode == NlosMode::per_episode ? "per_episode" : "per_slot";
}

double azimuth_from_position(const PositionSample& p, const BsGeometry& geom) {
  const Eigen::Vector3d d = p.position - geom.bs_position;
  if (d.x() == 0.0 && d.y() == 0.0) throw std::domain_error("undefined azimuth");
  return wrap_angle(std::atan2(d.y(), d.x()) - geom.boresight_azimuth);
}

PathSet gen_nlos_paths(std::size_t count, std::uint64_t rng_seed) {
  constexpr double pi = std::numbers::pi;
  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<std::size_t> level(0, kNlosGainLevels.size() - 1);

  PathSet out;
  out.aod.reserve(count);
  out.gain.reserve(count);
  for (std::size_t l = 0; l < count; ++l) {
    out.aod.push_back(pi - 2.0 * pi * to_unit_interval(rng()));  // (-pi, pi]
    const double mag = kNlosGainLevels[level(rng)];
    const double phase = 2.0 * pi * to_unit_interval(rng());
    out.gain.push_back(std::polar(mag, phase));
  }
  return out;
}

ComplexVector synthesize(const PathSet& paths, Eigen::Index n_antennas) {
  ComplexVector h = ComplexVector::Zero(n_antennas);
  for (std::size_t l = 0; l < paths.size(); ++l)
    h += paths.gain[l] * steering_vector(paths.aod[l], n_antennas);
  return h;
}

ChannelRealization gen_channel(const PositionSample& p, const BsGeometry& geom,
                               const ChannelConfig& cfg, std::uint64_t rng_seed) {
  const double theta0 = azimuth_from_position(p, geom);
  const std::uint64_t nlos_seed =
      cfg.nlos_mode == NlosMode::per_slot
          ? mix_seed(rng_seed, static_cast<std::uint64_t>(p.slot_index))
          : rng_seed;
  const PathSet nlos = gen_nlos_paths(cfg.l_nlos, nlos_seed);

  ChannelRealization ch;
  ch.h_los = steering_vector(theta0, cfg.n_antennas);
  ch.h_nlos = synthesize(nlos, cfg.n_antennas);
  ch.h = ch.h_los + ch.h_nlos;

  ch.paths.aod.reserve(nlos.size() + 1);
  ch.paths.gain.reserve(nlos.size() + 1);
  ch.paths.aod.push_back(theta0);
  ch.paths.gain.emplace_back(1.0, 0.0);
  ch.paths.aod.insert(ch.paths.aod.end(), nlos.aod.begin(), nlos.aod.end());
  ch.paths.gain.insert(ch.paths.gain.end(), nlos.gain.begin(), nlos.gain.end());
  return ch;
}

std::vector<ChannelRealization> gen_channels(const Trace& trace, const BsGeometry& geom,
                                             const ChannelConfig& cfg, std::uint64_t rng_seed) {
  std::vector<ChannelRealization> out;
  out.reserve(trace.size());
  for (const auto& p : trace) out.push_back(gen_channel(p, geom, cfg, rng_seed));
  return out;
}

void write_channel_csv(std::ostream& out, const std::vector<ChannelRealization>& channels) {
  if (channels.empty()) return;
  const Eigen::Index n = channels.front().h.size();
  out << "slot";
  for (Eigen::Index k = 0; k < n; ++k) out << ",re_h" << k;
  for (Eigen::Index k = 0; k < n; ++k) out << ",im_h" << k;
  out << '\n';
  for (std::size_t t = 0; t < channels.size(); ++t) {
    out << t;
    for (Eigen::Index k = 0; k < n; ++k) out << ',' << format_double(channels[t].h[k].real());
    for (Eigen::Index k = 0; k < n; ++k) out << ',' << format_double(channels[t].h[k].imag());
    out << '\n';
  }
}

}  // namespace sensebeam
