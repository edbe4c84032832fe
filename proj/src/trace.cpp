#include "sensebeam/trace.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string_view>

#include "sensebeam/format.hpp"

namespace sensebeam {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::int64_t> to_slot(std::string_view s) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0) return std::nullopt;
  return v;
}

[[noreturn]] void fail_at(std::size_t line, const std::string& what) {
  throw TraceError(what + " at line " + std::to_string(line));
}

void check_geodetic_range(double lat, double lon) {
  if (!(lat >= -90.0 && lat <= 90.0)) throw TraceError("latitude out of range: " + format_double(lat));
  if (!(lon >= -180.0 && lon <= 180.0))
    throw TraceError("longitude out of range: " + format_double(lon));
}

bool is_header(const std::vector<std::string_view>& fields) {
  return !fields.empty() && !to_slot(fields.front()).has_value() && !to_double(fields.front());
}

void validate_header(const std::vector<std::string_view>& fields, TraceFormat format,
                     std::size_t line) {
  static const std::vector<std::string_view> cart{"slot", "x", "y", "z"};
  static const std::vector<std::string_view> geo{"slot", "lat", "lon", "alt"};
  const auto& expected = format == TraceFormat::cartesian_csv ? cart : geo;
  if (fields.size() < 3 || fields.size() > 4 ||
      !std::equal(fields.begin(), fields.end(), expected.begin())) {
    fail_at(line, "unexpected header");
  }
}

}  // namespace

BsGeometry BsGeometry::from_boresight_deg(double deg) {
  BsGeometry g;
  g.boresight_azimuth = wrap_angle(deg * kDegToRad);
  return g;
}

TraceFormat parse_trace_format(const std::string& name) {
  if (name == "cartesian_csv" || name == "cartesian") return TraceFormat::cartesian_csv;
  if (name == "geodetic_csv" || name == "geodetic") return TraceFormat::geodetic_csv;
  throw std::invalid_argument("unknown trace format: " + name);
}

SynthKind parse_synth_kind(const std::string& name) {
  if (name == "linear") return SynthKind::linear;
  if (name == "random_walk") return SynthKind::random_walk;
  if (name == "arc") return SynthKind::arc;
  throw std::invalid_argument("unknown synthetic trace kind: " + name);
}

double wrap_angle(double rad) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(rad, two_pi);  // [-pi, pi]
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

std::vector<RawPositionRecord> parse_trace(std::istream& in, TraceFormat format) {
  std::vector<RawPositionRecord> records;
  std::string raw;
  std::size_t line_no = 0;
  bool seen_first = false;

  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_commas(line);

    if (!seen_first) {
      seen_first = true;
      if (is_header(fields)) {
        validate_header(fields, format, line_no);
        continue;
      }
    }

    if (fields.size() < 3 || fields.size() > 4) fail_at(line_no, "malformed row");
    const auto slot = to_slot(fields[0]);
    if (!slot) fail_at(line_no, "malformed row");

    std::array<double, 3> vals{0.0, 0.0, 0.0};
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const auto v = to_double(fields[i]);
      if (!v) fail_at(line_no, "malformed row");
      vals[i - 1] = *v;
    }

    if (!records.empty() && *slot <= records.back().slot_index)
      fail_at(line_no, "non-monotone slot index");

    RawPositionRecord rec;
    rec.slot_index = *slot;
    if (format == TraceFormat::cartesian_csv) {
      rec.coords = CartesianCoords{vals[0], vals[1], vals[2]};
    } else {
      if (vals[0] < -90.0 || vals[0] > 90.0 || vals[1] < -180.0 || vals[1] > 180.0)
        fail_at(line_no, "latitude/longitude out of range");
      GeodeticCoords g{vals[0], vals[1], std::nullopt};
      if (fields.size() == 4) g.alt = vals[2];
      rec.coords = g;
    }
    records.push_back(rec);
  }

  if (records.empty()) throw TraceError("empty trace");
  return records;
}

std::vector<RawPositionRecord> load_trace(const std::filesystem::path& path, TraceFormat format) {
  std::ifstream in(path);
  if (!in) throw TraceError("cannot open trace file: " + path.string());
  return parse_trace(in, format);
}

Trace geodetic_to_local(const std::vector<RawPositionRecord>& records, double bs_lat_deg,
                        double bs_lon_deg, double bs_alt_m) {
  check_geodetic_range(bs_lat_deg, bs_lon_deg);
  const double coslat = std::cos(bs_lat_deg * kDegToRad);
  Trace out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    const auto* g = std::get_if<GeodeticCoords>(&rec.coords);
    if (g == nullptr) throw TraceError("geodetic_to_local: record is not geodetic");
    check_geodetic_range(g->lat, g->lon);
    PositionSample s;
    s.slot_index = rec.slot_index;
    s.position.x() = kEarthRadius * (g->lon - bs_lon_deg) * coslat * kDegToRad;
    s.position.y() = kEarthRadius * (g->lat - bs_lat_deg) * kDegToRad;
    s.position.z() = g->alt ? *g->alt - bs_alt_m : 0.0;
    out.push_back(s);
  }
  return out;
}

GeodeticCoords local_to_geodetic(const Eigen::Vector3d& enu, double bs_lat_deg, double bs_lon_deg,
                                 double bs_alt_m) {
  const double coslat = std::cos(bs_lat_deg * kDegToRad);
  GeodeticCoords g;
  g.lat = bs_lat_deg + enu.y() / (kEarthRadius * kDegToRad);
  g.lon = bs_lon_deg + enu.x() / (kEarthRadius * coslat * kDegToRad);
  g.alt = bs_alt_m + enu.z();
  return g;
}

Trace cartesian_to_local(const std::vector<RawPositionRecord>& records) {
  Trace out;
  out.reserve(records.size());
  for (const auto& rec : records) {
    const auto* c = std::get_if<CartesianCoords>(&rec.coords);
    if (c == nullptr) throw TraceError("cartesian_to_local: record is not cartesian");
    out.push_back({rec.slot_index, Eigen::Vector3d(c->x, c->y, c->z)});
  }
  return out;
}

Trace normalize_slots(const Trace& samples, GapPolicy gaps) {
  if (samples.empty()) throw TraceError("empty trace");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!samples[i].position.allFinite()) throw TraceError("non-finite position");
    if (i > 0 && samples[i].slot_index <= samples[i - 1].slot_index)
      throw TraceError("non-monotone slot index");
  }

  const std::int64_t first = samples.front().slot_index;
  const std::int64_t span = samples.back().slot_index - first + 1;
  if (gaps == GapPolicy::reject && span != static_cast<std::int64_t>(samples.size())) {
    for (std::size_t i = 1; i < samples.size(); ++i) {
      if (samples[i].slot_index != samples[i - 1].slot_index + 1)
        throw TraceError("missing slot " + std::to_string(samples[i - 1].slot_index + 1));
    }
  }

  Trace out;
  out.reserve(static_cast<std::size_t>(span));
  std::size_t j = 0;  // samples[j] is the last sample at or before the current slot
  for (std::int64_t s = first; s <= samples.back().slot_index; ++s) {
    while (j + 1 < samples.size() && samples[j + 1].slot_index <= s) ++j;
    std::size_t pick = j;
    if (samples[j].slot_index != s && j + 1 < samples.size() &&
        samples[j + 1].slot_index - s < s - samples[j].slot_index) {
      pick = j + 1;
    }
    out.push_back({s - first, samples[pick].position});
  }
  return out;
}

Trace synth_trace(SynthKind kind, std::size_t slots, double speed, std::uint64_t seed,
                  const SynthOptions& opts) {
  if (slots < 2) throw std::invalid_argument("synth_trace: need at least 2 slots");
  if (!(speed >= 0.0)) throw std::invalid_argument("synth_trace: speed must be >= 0");
  if (!(opts.radius > 0.0)) throw std::invalid_argument("synth_trace: radius must be > 0");

  Trace out;
  out.reserve(slots);
  const Eigen::Vector3d start(opts.radius * std::cos(opts.start_azimuth),
                              opts.radius * std::sin(opts.start_azimuth), opts.height);

  switch (kind) {
    case SynthKind::linear: {
      const Eigen::Vector3d step(speed * std::cos(opts.heading), speed * std::sin(opts.heading), 0.0);
      for (std::size_t k = 0; k < slots; ++k)
        out.push_back({static_cast<std::int64_t>(k), start + static_cast<double>(k) * step});
      break;
    }
    case SynthKind::random_walk: {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> turn(0.0, opts.heading_sigma);
      Eigen::Vector3d pos = start;
      double heading = opts.heading;
      for (std::size_t k = 0; k < slots; ++k) {
        out.push_back({static_cast<std::int64_t>(k), pos});
        heading += turn(rng);
        pos += Eigen::Vector3d(speed * std::cos(heading), speed * std::sin(heading), 0.0);
      }
      break;
    }
    case SynthKind::arc: {
      const double rate = speed / opts.radius;
      for (std::size_t k = 0; k < slots; ++k) {
        const double az = opts.start_azimuth + rate * static_cast<double>(k);
        out.push_back({static_cast<std::int64_t>(k),
                       Eigen::Vector3d(opts.radius * std::cos(az), opts.radius * std::sin(az),
                                       opts.height)});
      }
      break;
    }
  }
  return out;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "slot,x,y,z\n";
  for (const auto& s : trace) {
    out << s.slot_index << ',' << format_double(s.position.x()) << ','
        << format_double(s.position.y()) << ',' << format_double(s.position.z()) << '\n';
  }
}

}  // namespace sensebeam
