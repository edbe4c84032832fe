#include "sensebeam/app.hpp"

#include <fstream>
#include <iomanip>
#include <iterator>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sensebeam/format.hpp"

namespace sensebeam {

using nlohmann::json;

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& item : j.items()) {
    if (!allowed.contains(item.key()))
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

template <typename T>
T read(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("wrong type for '") + key + "'");
  }
}

std::uint64_t read_u64(const json& j, const char* key, std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceError("cannot open trace file: " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  out << contents;
  if (!out) throw std::ios_base::failure("cannot write " + path.string());
}

json number_or_null(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

struct Loaded {
  AppConfig cfg;
  LoadedTrace trace;
};

// Shared front half of every command; maps failures onto exit codes.
std::optional<int> load_inputs(const std::filesystem::path& config_path,
                               const std::optional<std::filesystem::path>& trace_path,
                               const CommandOptions& opts, std::ostream& err, Loaded& out) {
  try {
    out.cfg = load_config(config_path);
    if (opts.seed) set_seed(out.cfg, *opts.seed);
    out.cfg.sim.validate();
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  try {
    out.trace = resolve_trace(out.cfg, trace_path);
  } catch (const std::exception& e) {
    err << "trace error: " << e.what() << '\n';
    return kExitTrace;
  }
  return std::nullopt;
}

json manifest_base(const char* command, const AppConfig& cfg, const LoadedTrace& trace) {
  json m;
  m["version"] = kVersion;
  m["command"] = command;
  m["config"] = json::parse(config_to_json(cfg));
  m["seeds"] = {{"seed", cfg.seed},
                {"channel_seed", cfg.sim.channel_seed},
                {"policy_seed", cfg.sim.policy_seed}};
  m["trace"] = {{"source", trace.source},
                {"slots", trace.trace.size()},
                {"checksum_fnv1a64", hex64(trace.checksum)}};
  return m;
}

}  // namespace

void set_seed(AppConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
  cfg.sim.channel_seed = seed;
  cfg.sim.policy_seed = splitmix64(seed);
}

AppConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("config") && j["config"].is_object()) j = j["config"];
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  check_keys(j,
             {"n_antennas", "l_nlos", "noise_power", "p_max_db", "v", "alpha", "policy_kind",
              "objective_mode", "magnitude_mode", "nlos_mode", "episodes", "trace", "seed",
              "policies"},
             "config");

  AppConfig cfg;
  try {
    auto& sim = cfg.sim;
    const auto n = read<std::int64_t>(j, "n_antennas", 6);
    if (n < 1) throw ConfigError("n_antennas must be >= 1");
    sim.channel.n_antennas = n;
    const auto l = read<std::int64_t>(j, "l_nlos", 5);
    if (l < 0) throw ConfigError("l_nlos must be >= 0");
    sim.channel.l_nlos = static_cast<std::size_t>(l);
    sim.channel.nlos_mode = parse_nlos_mode(read<std::string>(j, "nlos_mode", "per_episode"));
    sim.noise_power = read<double>(j, "noise_power", 1.0);
    cfg.p_max_db = read<double>(j, "p_max_db", 5.0);
    sim.policy.p_max = db_to_linear(cfg.p_max_db);
    sim.policy.v = read<double>(j, "v", 1.0);
    sim.policy.alpha = read<double>(j, "alpha", 0.5);
    sim.policy.objective_mode = parse_objective_mode(read<std::string>(j, "objective_mode", "genie"));
    sim.policy.magnitude_mode =
        parse_magnitude_mode(read<std::string>(j, "magnitude_mode", "squared"));
    sim.policy_kind = parse_policy_kind(read<std::string>(j, "policy_kind", "lyapunov"));
    const auto episodes = read<std::int64_t>(j, "episodes", 20);
    if (episodes < 1) throw ConfigError("episodes must be >= 1");
    cfg.episodes = static_cast<std::size_t>(episodes);
    set_seed(cfg, read_u64(j, "seed", 1));

    if (j.contains("policies")) {
      cfg.policies.clear();
      for (const auto& p : read<std::vector<std::string>>(j, "policies", {}))
        cfg.policies.push_back(parse_policy_kind(p));
      if (cfg.policies.empty()) throw ConfigError("policies must not be empty");
    }

    if (j.contains("trace")) {
      const auto& t = j.at("trace");
      if (!t.is_object()) throw ConfigError("trace must be an object");
      check_keys(t, {"format", "bs_lat", "bs_lon", "bs_alt", "boresight_deg", "resample", "synthetic"},
                 "trace");
      auto& ts = cfg.trace;
      ts.format = parse_trace_format(read<std::string>(t, "format", "cartesian_csv"));
      ts.bs_lat = read<double>(t, "bs_lat", 0.0);
      ts.bs_lon = read<double>(t, "bs_lon", 0.0);
      ts.bs_alt = read<double>(t, "bs_alt", 0.0);
      ts.boresight_deg = read<double>(t, "boresight_deg", 0.0);
      const auto resample = read<std::string>(t, "resample", "reject");
      if (resample == "reject") {
        ts.gaps = GapPolicy::reject;
      } else if (resample == "nearest") {
        ts.gaps = GapPolicy::nearest;
      } else {
        throw ConfigError("trace.resample must be 'reject' or 'nearest'");
      }
      if (t.contains("synthetic")) {
        const auto& s = t.at("synthetic");
        check_keys(s,
                   {"kind", "slots", "speed", "seed", "radius", "start_azimuth_deg", "heading_deg",
                    "heading_sigma", "height"},
                   "trace.synthetic");
        SyntheticTraceSpec spec;
        spec.kind = parse_synth_kind(read<std::string>(s, "kind", "arc"));
        const auto slots = read<std::int64_t>(s, "slots", 200);
        if (slots < 2) throw ConfigError("trace.synthetic.slots must be >= 2");
        spec.slots = static_cast<std::size_t>(slots);
        spec.speed = read<double>(s, "speed", 0.1);
        spec.seed = read_u64(s, "seed", 0);
        spec.options.radius = read<double>(s, "radius", spec.options.radius);
        spec.options.start_azimuth = read<double>(s, "start_azimuth_deg", 0.0) * kDegToRad;
        spec.options.heading = read<double>(s, "heading_deg", 90.0) * kDegToRad;
        spec.options.heading_sigma = read<double>(s, "heading_sigma", spec.options.heading_sigma);
        spec.options.height = read<double>(s, "height", 0.0);
        ts.synthetic = spec;
      }
    }
    sim.geometry = BsGeometry::from_boresight_deg(cfg.trace.boresight_deg);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_config(text);
}

std::string config_to_json(const AppConfig& cfg) {
  const auto& sim = cfg.sim;
  json j;
  j["n_antennas"] = sim.channel.n_antennas;
  j["l_nlos"] = sim.channel.l_nlos;
  j["noise_power"] = sim.noise_power;
  j["p_max_db"] = cfg.p_max_db;
  j["v"] = sim.policy.v;
  j["alpha"] = sim.policy.alpha;
  j["policy_kind"] = to_string(sim.policy_kind);
  j["objective_mode"] = to_string(sim.policy.objective_mode);
  j["magnitude_mode"] = to_string(sim.policy.magnitude_mode);
  j["nlos_mode"] = to_string(sim.channel.nlos_mode);
  j["episodes"] = cfg.episodes;
  j["seed"] = cfg.seed;
  json pols = json::array();
  for (const auto p : cfg.policies) pols.push_back(to_string(p));
  j["policies"] = pols;

  const auto& ts = cfg.trace;
  json t;
  t["format"] = ts.format == TraceFormat::cartesian_csv ? "cartesian_csv" : "geodetic_csv";
  t["bs_lat"] = ts.bs_lat;
  t["bs_lon"] = ts.bs_lon;
  t["bs_alt"] = ts.bs_alt;
  t["boresight_deg"] = ts.boresight_deg;
  t["resample"] = ts.gaps == GapPolicy::reject ? "reject" : "nearest";
  if (ts.synthetic) {
    const auto& s = *ts.synthetic;
    const char* kind = s.kind == SynthKind::arc ? "arc"
                       : s.kind == SynthKind::linear ? "linear"
                                                     : "random_walk";
    t["synthetic"] = {{"kind", kind},
                      {"slots", s.slots},
                      {"speed", s.speed},
                      {"seed", s.seed},
                      {"radius", s.options.radius},
                      {"start_azimuth_deg", s.options.start_azimuth / kDegToRad},
                      {"heading_deg", s.options.heading / kDegToRad},
                      {"heading_sigma", s.options.heading_sigma},
                      {"height", s.options.height}};
  }
  j["trace"] = t;
  return j.dump(2);
}

LoadedTrace resolve_trace(const AppConfig& cfg, const std::optional<std::filesystem::path>& path) {
  LoadedTrace out;
  if (path) {
    const std::string text = read_file(*path);
    std::istringstream in(text);
    const auto records = parse_trace(in, cfg.trace.format);
    const auto& ts = cfg.trace;
    const Trace local = ts.format == TraceFormat::geodetic_csv
                            ? geodetic_to_local(records, ts.bs_lat, ts.bs_lon, ts.bs_alt)
                            : cartesian_to_local(records);
    out.trace = normalize_slots(local, ts.gaps);
    out.checksum = fnv1a64(text);
    out.source = path->string();
  } else if (cfg.trace.synthetic) {
    const auto& s = *cfg.trace.synthetic;
    out.trace = synth_trace(s.kind, s.slots, s.speed, s.seed, s.options);
    std::ostringstream csv;
    write_trace_csv(csv, out.trace);
    out.checksum = fnv1a64(csv.str());
    out.source = "synthetic";
  } else {
    throw TraceError("no trace: pass --trace or configure trace.synthetic");
  }
  if (out.trace.size() < 2) throw TraceError("trace needs at least 2 slots");
  return out;
}

int cmd_run(const std::filesystem::path& config_path,
            const std::optional<std::filesystem::path>& trace_path,
            const std::filesystem::path& out_dir, const CommandOptions& opts, std::ostream& err) {
  Loaded in;
  if (auto code = load_inputs(config_path, trace_path, opts, err, in)) return *code;

  EpisodeMetrics m;
  try {
    m = run_episode(in.cfg.sim, in.trace.trace);
  } catch (const std::domain_error& e) {
    err << "trace error: " << e.what() << '\n';
    return kExitTrace;
  }

  try {
    std::filesystem::create_directories(out_dir);
    std::ostringstream per_slot;
    write_per_slot_csv(per_slot, m);
    write_file(out_dir / "per_slot.csv", per_slot.str());

    json summary;
    summary["policy_kind"] = to_string(in.cfg.sim.policy_kind);
    summary["avg_snr_linear"] = m.avg_snr;
    summary["avg_snr_db"] = m.avg_snr_db;
    summary["sensing_rate"] = number_or_null(m.sensing_rate);
    summary["final_queue"] = m.final_queue;
    summary["slots"] = m.slots();
    write_file(out_dir / "summary.json", summary.dump(2) + "\n");

    json manifest = manifest_base("run", in.cfg, in.trace);
    manifest["outputs"] = {"per_slot.csv", "summary.json", "manifest.json"};
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

int cmd_sweep(const std::filesystem::path& config_path,
              const std::optional<std::filesystem::path>& trace_path, const std::string& axis_name,
              const std::vector<double>& values, const std::filesystem::path& out_dir,
              const CommandOptions& opts, std::ostream& err) {
  SweepSpec spec;
  try {
    spec.axis = parse_sweep_axis(axis_name);
    if (values.empty()) throw std::invalid_argument("no sweep values");
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  spec.values = values;

  Loaded in;
  if (auto code = load_inputs(config_path, trace_path, opts, err, in)) return *code;
  spec.episodes = in.cfg.episodes;
  spec.policies = in.cfg.policies;
  spec.jobs = opts.jobs;

  std::vector<SweepRow> rows;
  try {
    rows = sweep(in.cfg.sim, in.trace.trace, spec);
  } catch (const std::domain_error& e) {
    err << "trace error: " << e.what() << '\n';
    return kExitTrace;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    std::filesystem::create_directories(out_dir);
    std::ostringstream csv;
    write_sweep_csv(csv, rows);
    write_file(out_dir / "sweep.csv", csv.str());

    json manifest = manifest_base("sweep", in.cfg, in.trace);
    manifest["sweep"] = {{"axis", to_string(spec.axis)}, {"values", values}};
    manifest["outputs"] = {"sweep.csv", "manifest.json"};
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

OracleComparison compare_with_oracle(const SimConfig& cfg, const Trace& trace, std::size_t horizon) {
  if (horizon > kMaxOracleHorizon) throw std::invalid_argument("horizon too large");
  if (trace.size() < horizon) throw TraceError("trace shorter than horizon");
  const Trace head(trace.begin(), trace.begin() + static_cast<std::ptrdiff_t>(horizon));
  const auto channels = gen_channels(head, cfg.geometry, cfg.channel, cfg.channel_seed);

  SimConfig lyap = cfg;
  lyap.policy_kind = PolicyKind::lyapunov;
  const EpisodeMetrics m = run_episode(lyap, channels);
  const OfflineOptimum opt = brute_force_offline(channels, horizon, cfg.policy, cfg.noise_power);

  OracleComparison cmp;
  cmp.lyapunov_avg_snr = m.avg_snr;
  cmp.optimal_avg_snr = opt.best_avg_snr;
  cmp.gap_percent = 100.0 * (opt.best_avg_snr - m.avg_snr) / opt.best_avg_snr;
  for (const auto& r : m.per_slot) cmp.lyapunov_sequence.push_back(r.x ? 1 : 0);
  cmp.optimal_sequence = opt.best_sequence;
  return cmp;
}

int cmd_oracle(const std::filesystem::path& config_path,
               const std::optional<std::filesystem::path>& trace_path, std::size_t horizon,
               const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  if (horizon > kMaxOracleHorizon || horizon == 0) {
    err << "horizon must be in [1, " << kMaxOracleHorizon << "], got " << horizon << '\n';
    return kExitHorizon;
  }
  Loaded in;
  if (auto code = load_inputs(config_path, trace_path, opts, err, in)) return *code;

  OracleComparison cmp;
  try {
    cmp = compare_with_oracle(in.cfg.sim, in.trace.trace, horizon);
  } catch (const TraceError& e) {
    err << "trace error: " << e.what() << '\n';
    return kExitTrace;
  } catch (const std::domain_error& e) {
    err << "trace error: " << e.what() << '\n';
    return kExitTrace;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  auto seq = [](const std::vector<int>& s) {
    std::string r;
    for (const int x : s) r += x ? '1' : '0';
    return r;
  };
  out << "policy,avg_snr_linear,avg_snr_db,sensing_sequence\n";
  out << "lyapunov," << format_double(cmp.lyapunov_avg_snr) << ','
      << format_double(linear_to_db(cmp.lyapunov_avg_snr)) << ',' << seq(cmp.lyapunov_sequence)
      << '\n';
  out << "offline_optimal," << format_double(cmp.optimal_avg_snr) << ','
      << format_double(linear_to_db(cmp.optimal_avg_snr)) << ',' << seq(cmp.optimal_sequence)
      << '\n';
  out << "gap_percent," << format_double(cmp.gap_percent) << '\n';
  return kExitOk;
}

}  // namespace sensebeam
