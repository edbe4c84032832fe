#include "sensebeam/sim.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <ostream>
#include <thread>

#include "sensebeam/format.hpp"

namespace sensebeam {

PolicyKind parse_policy_kind(const std::string& name) {
  for (const auto k : kAllPolicies)
    if (name == to_string(k)) return k;
  throw std::invalid_argument("unknown policy_kind: " + name);
}

const char* to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::lyapunov: return "lyapunov";
    case PolicyKind::greedy: return "greedy";
    case PolicyKind::random: return "random";
    case PolicyKind::always: return "always";
    case PolicyKind::never: return "never";
    case PolicyKind::perfect_csi: return "perfect_csi";
  }
  return "?";
}

void SimConfig::validate() const {
  if (channel.n_antennas < 1) throw std::invalid_argument("n_antennas must be >= 1");
  if (!(noise_power > 0.0) || !std::isfinite(noise_power))
    throw std::invalid_argument("noise_power must be > 0");
  policy.validate();
}

EpisodeMetrics run_episode(const SimConfig& cfg, const Trace& trace) {
  if (trace.size() < 2) throw std::invalid_argument("trace needs at least 2 slots");
  for (std::size_t t = 0; t < trace.size(); ++t) {
    if (trace[t].slot_index != static_cast<std::int64_t>(t))
      throw std::invalid_argument("trace is not normalized (slot " + std::to_string(t) + ")");
  }
  return run_episode(cfg, gen_channels(trace, cfg.geometry, cfg.channel, cfg.channel_seed));
}

EpisodeMetrics run_episode(const SimConfig& cfg, const std::vector<ChannelRealization>& channels) {
  cfg.validate();
  if (channels.empty()) throw std::invalid_argument("no channels");
  const double alpha = cfg.policy.alpha;
  const double p_max = cfg.policy.p_max;

  EpisodeMetrics m;
  m.per_slot.reserve(channels.size());
  EstimatorState est;
  QueueState q;
  std::size_t senses_so_far = 0;
  double sensed_aod = 0.0;
  double snr_sum = 0.0;

  for (std::size_t t = 0; t < channels.size(); ++t) {
    const auto& ch = channels[t];
    const auto slot = static_cast<std::int64_t>(t);
    bool x = false;
    ComplexVector w;

    switch (cfg.policy_kind) {
      case PolicyKind::lyapunov: {
        SlotDecision d = lyapunov_decide(ch.h, ch.h_los, est, q, cfg.policy);
        x = d.x;
        w = std::move(d.w);
        break;
      }
      case PolicyKind::greedy: {
        const double avg = t == 0 ? 0.0 : static_cast<double>(senses_so_far) / static_cast<double>(t);
        x = t == 0 || greedy_decide(avg, alpha);
        break;
      }
      case PolicyKind::random:
        x = t == 0 || random_decide(alpha, cfg.policy_seed, slot);
        break;
      case PolicyKind::always:
        x = true;
        break;
      case PolicyKind::never:
        if (t == 0) {
          est = commit(est, true, ch.h_los, slot);
          sensed_aod = ch.paths.aod[0];
        }
        x = false;
        break;
      case PolicyKind::perfect_csi:
        w = perfect_csi_beam(ch.h, p_max);
        break;
    }

    if (w.size() == 0) w = mrt(available_channel(est, x, ch.h_los), p_max);

    SlotRecord rec;
    rec.slot = slot;
    rec.x = x;
    rec.snr = beam_power(ch.h, w) / cfg.noise_power;
    if (x) sensed_aod = ch.paths.aod[0];
    rec.aod_error = cfg.policy_kind == PolicyKind::perfect_csi
                        ? 0.0
                        : std::abs(wrap_angle(ch.paths.aod[0] - sensed_aod));

    if (cfg.policy_kind != PolicyKind::perfect_csi) est = commit(est, x, ch.h_los, slot);
    q = queue_update(q, x, alpha);
    rec.q_after = q.q;

    senses_so_far += x ? 1 : 0;
    snr_sum += rec.snr;
    m.per_slot.push_back(rec);
  }

  const auto n = static_cast<double>(channels.size());
  m.avg_snr = snr_sum / n;
  m.avg_snr_db = linear_to_db(m.avg_snr);
  if (senses(cfg.policy_kind)) m.sensing_rate = static_cast<double>(senses_so_far) / n;
  m.final_queue = q.q;
  return m;
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "alpha") return SweepAxis::alpha;
  if (name == "p_max" || name == "p_max_db") return SweepAxis::p_max_db;
  if (name == "v") return SweepAxis::v;
  throw std::invalid_argument("unknown sweep axis: " + name);
}

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::alpha: return "alpha";
    case SweepAxis::p_max_db: return "p_max";
    case SweepAxis::v: return "v";
  }
  return "?";
}

void apply_axis(SimConfig& cfg, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::alpha: cfg.policy.alpha = value; break;
    case SweepAxis::p_max_db: cfg.policy.p_max = db_to_linear(value); break;
    case SweepAxis::v: cfg.policy.v = value; break;
  }
}

std::vector<SweepRow> sweep(const SimConfig& tmpl, const Trace& trace, const SweepSpec& spec) {
  if (spec.values.empty()) throw std::invalid_argument("sweep: no axis values");
  if (spec.episodes == 0) throw std::invalid_argument("sweep: episodes must be >= 1");
  if (spec.policies.empty()) throw std::invalid_argument("sweep: no policies");

  std::vector<double> values = spec.values;
  std::stable_sort(values.begin(), values.end());

  const std::size_t n_pol = spec.policies.size();
  const std::size_t n_cells = values.size() * n_pol;
  const std::size_t n_tasks = n_cells * spec.episodes;

  // Validate every configuration up front so worker threads never throw.
  for (const double v : values) {
    SimConfig c = tmpl;
    apply_axis(c, spec.axis, v);
    c.validate();
  }

  std::vector<EpisodeMetrics> results(n_tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n_tasks; i = next.fetch_add(1)) {
      const std::size_t episode = i % spec.episodes;
      const std::size_t cell = i / spec.episodes;
      SimConfig c = tmpl;
      apply_axis(c, spec.axis, values[cell / n_pol]);
      c.policy_kind = spec.policies[cell % n_pol];
      c.channel_seed = episode_seed(tmpl.channel_seed, episode);
      c.policy_seed = episode_seed(tmpl.policy_seed, episode);
      results[i] = run_episode(c, trace);
      results[i].per_slot.clear();
      results[i].per_slot.shrink_to_fit();
    }
  };

  unsigned jobs = spec.jobs != 0 ? spec.jobs : std::max(1U, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n_tasks));
  {
    std::vector<std::jthread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }

  std::vector<SweepRow> rows;
  rows.reserve(n_cells);
  const auto n_ep = static_cast<double>(spec.episodes);
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    SweepRow row;
    row.value = values[cell / n_pol];
    row.policy = spec.policies[cell % n_pol];
    row.slots = trace.size();
    double sum = 0.0, sum_sq = 0.0, rate = 0.0, queue = 0.0;
    for (std::size_t e = 0; e < spec.episodes; ++e) {
      const auto& m = results[cell * spec.episodes + e];
      sum += m.avg_snr;
      sum_sq += m.avg_snr * m.avg_snr;
      rate += m.sensing_rate.value_or(0.0);
      queue += m.final_queue;
    }
    row.avg_snr = sum / n_ep;
    row.avg_snr_db = linear_to_db(row.avg_snr);
    if (spec.episodes > 1) {
      const double var = std::max(0.0, (sum_sq - n_ep * row.avg_snr * row.avg_snr) / (n_ep - 1.0));
      row.avg_snr_stderr = std::sqrt(var / n_ep);
    }
    if (senses(row.policy)) row.sensing_rate = rate / n_ep;
    row.final_queue = queue / n_ep;
    rows.push_back(row);
  }
  return rows;
}

void write_per_slot_csv(std::ostream& out, const EpisodeMetrics& m) {
  const bool has_x = m.sensing_rate.has_value();
  out << "slot,x,snr,q_after,aod_error\n";
  for (const auto& r : m.per_slot) {
    out << r.slot << ',';
    if (has_x) out << (r.x ? 1 : 0);
    out << ',' << format_double(r.snr) << ',' << format_double(r.q_after) << ','
        << format_double(r.aod_error) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "axis_value,policy,avg_snr_linear,avg_snr_db,sensing_rate,final_queue\n";
  for (const auto& r : rows) {
    out << format_double(r.value) << ',' << to_string(r.policy) << ','
        << format_double(r.avg_snr) << ',' << format_double(r.avg_snr_db) << ',';
    if (r.sensing_rate) out << format_double(*r.sensing_rate);
    out << ',' << format_double(r.final_queue) << '\n';
  }
}

}  // namespace sensebeam
