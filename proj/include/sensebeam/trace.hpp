#ifndef SENSEBEAM_TRACE_HPP
#define SENSEBEAM_TRACE_HPP

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace sensebeam {

/// Mean Earth radius used by the local equirectangular projection [m].
inline constexpr double kEarthRadius = 6'371'000.0;

/// Raised for malformed or inconsistent trace input.
class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CartesianCoords {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct GeodeticCoords {
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees
  std::optional<double> alt;  // meters
};

struct RawPositionRecord {
  std::int64_t slot_index = 0;
  std::variant<CartesianCoords, GeodeticCoords> coords;
};

/// UE position for one slot, in meters, in a frame centered on the BS antenna.
struct PositionSample {
  std::int64_t slot_index = 0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
};

using Trace = std::vector<PositionSample>;

/// BS placement in the local frame. The array broadside points along
/// `boresight_azimuth`, measured counter-clockwise from +x.
struct BsGeometry {
  Eigen::Vector3d bs_position = Eigen::Vector3d::Zero();
  double boresight_azimuth = 0.0;

  static BsGeometry from_boresight_deg(double deg);
};

enum class TraceFormat { cartesian_csv, geodetic_csv };
enum class SynthKind { linear, random_walk, arc };
enum class GapPolicy { reject, nearest };

TraceFormat parse_trace_format(const std::string& name);
SynthKind parse_synth_kind(const std::string& name);

/// Wraps an angle to (-pi, pi].
double wrap_angle(double rad);

/// Reads a position CSV. Accepts '#' comment lines and blank lines; the first
/// non-comment line must be the schema header. Errors carry the 1-based line
/// number of the offending row.
std::vector<RawPositionRecord> load_trace(const std::filesystem::path& path, TraceFormat format);
std::vector<RawPositionRecord> parse_trace(std::istream& in, TraceFormat format);

/// Local ENU projection about the BS (equirectangular approximation).
Trace geodetic_to_local(const std::vector<RawPositionRecord>& records, double bs_lat_deg,
                        double bs_lon_deg, double bs_alt_m = 0.0);

/// Inverse of geodetic_to_local for a single point; returns (lat, lon, alt).
GeodeticCoords local_to_geodetic(const Eigen::Vector3d& enu, double bs_lat_deg, double bs_lon_deg,
                                 double bs_alt_m = 0.0);

/// Cartesian records are taken as already BS-centered.
Trace cartesian_to_local(const std::vector<RawPositionRecord>& records);

/// Rebases slot indices to start at 0 and enforces one sample per slot.
/// With GapPolicy::nearest, missing slots are filled from the temporally
/// nearest sample (earlier one on ties).
Trace normalize_slots(const Trace& samples, GapPolicy gaps = GapPolicy::reject);

struct SynthOptions {
  double radius = 10.0;         // arc radius / linear start range [m]
  double start_azimuth = 0.0;   // [rad]
  double heading = std::numbers::pi / 2.0;  // initial heading for linear / random_walk [rad]
  double heading_sigma = 0.2;   // random_walk heading step std-dev [rad]
  double height = 0.0;          // constant z [m]
};

/// Deterministic synthetic mobility. `speed` is in meters per slot; for the
/// arc kind the angular rate is speed / radius.
Trace synth_trace(SynthKind kind, std::size_t slots, double speed, std::uint64_t seed,
                  const SynthOptions& opts = {});

void write_trace_csv(std::ostream& out, const Trace& trace);

}  // namespace sensebeam

#endif  // SENSEBEAM_TRACE_HPP
