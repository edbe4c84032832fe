#ifndef SENSEBEAM_FORMAT_HPP
#define SENSEBEAM_FORMAT_HPP

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

namespace sensebeam {

// Shortest round-trip representation; output is byte-stable across runs.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// 64-bit FNV-1a, used for input checksums in run manifests.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace sensebeam

#endif  // SENSEBEAM_FORMAT_HPP
