// Test-only reference computations, written independently of the library's
// implementation paths.
#ifndef SENSEBEAM_TESTS_ORACLES_HPP
#define SENSEBEAM_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "sensebeam/channel.hpp"

namespace oracle {

// |a(a)^H a(b)|^2 for a 2-element half-wavelength ULA, in closed form.
inline double overlap2(double a, double b) {
  return 0.5 * (1.0 + std::cos(std::numbers::pi * (std::sin(a) - std::sin(b))));
}

// Element-by-element steering vector, no Eigen expressions.
inline std::vector<std::complex<double>> steering(double theta, int n) {
  std::vector<std::complex<double>> a(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    a[static_cast<std::size_t>(k)] =
        std::exp(std::complex<double>(0.0, k * std::numbers::pi * std::sin(theta))) /
        std::sqrt(static_cast<double>(n));
  return a;
}

// SNR of a beam matched to `est` (scaled to p_max) evaluated on `h`.
inline double matched_snr(const sensebeam::ComplexVector& h, const sensebeam::ComplexVector& est,
                          double p_max, double noise) {
  std::complex<double> ip = 0.0;
  double n2 = 0.0;
  for (Eigen::Index k = 0; k < h.size(); ++k) {
    ip += std::conj(h[k]) * est[k];
    n2 += std::norm(est[k]);
  }
  return p_max * std::norm(ip) / n2 / noise;
}

struct Best {
  std::vector<int> seq;
  double avg = -1.0;
};

// Enumerates all 2^T sequences literally, replaying the stale-LoS cache.
inline Best enumerate(const std::vector<sensebeam::ChannelRealization>& ch, double alpha,
                      double p_max, double noise) {
  const std::size_t T = ch.size();
  Best best;
  for (std::uint32_t bits = 0; bits < (1U << T); ++bits) {
    std::vector<int> x(T);
    int count = 0;
    for (std::size_t t = 0; t < T; ++t) {
      x[t] = (bits >> (T - 1 - t)) & 1U;
      count += x[t];
    }
    if (x[0] != 1 || static_cast<double>(count) > alpha * static_cast<double>(T) + 1e-9) continue;
    sensebeam::ComplexVector cache;
    double total = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      if (x[t]) cache = ch[t].h_los;
      total += matched_snr(ch[t].h, cache, p_max, noise);
    }
    const double avg = total / static_cast<double>(T);
    if (avg > best.avg + 1e-12) best = {x, avg};
  }
  return best;
}

}  // namespace oracle

#endif
