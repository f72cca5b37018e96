#include "wsnlife/harness.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

#include "wsnlife/balancer.hpp"
#include "wsnlife/errors.hpp"
#include "wsnlife/exact.hpp"
#include "wsnlife/flowbound.hpp"

namespace wsn {

using nlohmann::json;

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) {
  constexpr std::uint64_t M0 = 0xD2511F53u;
  constexpr std::uint64_t M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u;
  constexpr std::uint32_t W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = M0 * c[0];
    const std::uint64_t p1 = M1 * c[2];
    c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
         static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
         static_cast<std::uint32_t>(p0)};
    k[0] += W0;
    k[1] += W1;
  }
  return c;
}

TrialStream::TrialStream(std::uint64_t seed, std::uint32_t trial,
                         std::uint32_t attempt)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      trial_(trial), attempt_(attempt) {}

std::uint32_t TrialStream::next_u32() {
  if (used_ == 4) {
    buf_ = philox4x32({block_++, 0, trial_, attempt_}, key_);
    used_ = 0;
  }
  return buf_[used_++];
}

std::uint64_t TrialStream::next_u64() {
  const std::uint64_t hi = next_u32();
  return (hi << 32) | next_u32();
}

double TrialStream::uniform_open() {
  // 53 random bits centered in their cell, so neither end is reachable.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double TrialStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform_open();
}

int TrialStream::uniform_int(int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(next_u64() % span);
}

double TrialStream::normal(double mean, double stddev) {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return mean + stddev * z;
  }
  const double u1 = uniform_open();
  const double u2 = uniform_open();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  return mean + stddev * radius * std::cos(angle);
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::invalid_input, what); };
  if (n_sensors.lo < 1 || n_sensors.hi < n_sensors.lo) fail("n_sensors range");
  if (m_cs.lo < 1 || m_cs.hi < m_cs.lo) fail("m_cs range");
  if (!(range_over_length > 0.0 && range_over_length <= 1.0)) fail("range_over_length must be in (0,1]");
  if (!(energy_mean > 0.0)) fail("energy_mean must be > 0");
  if (!(energy_stddev >= 0.0)) fail("energy_stddev must be >= 0");
  if (trials < 1) fail("trials must be >= 1");
  if (max_attempts < 1) fail("max_attempts must be >= 1");
  if (max_exact_sensors < 1) fail("max_exact_sensors must be >= 1");
  if (exact_time_budget.count() <= 0) fail("exact_time_budget_s must be > 0");
  for (int eta : eta_list) {
    if (eta < 1) fail("eta values must be >= 1");
  }
  for (double r : ranges) {
    if (!(r > 0.0 && r <= 1.0)) fail("sweep ranges must be in (0,1]");
  }
}

namespace {

IntRange int_range(const json& v, const char* key) {
  if (v.is_number_integer()) {
    const int x = v.get<int>();
    return {x, x};
  }
  if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer()) {
    return {v[0].get<int>(), v[1].get<int>()};
  }
  throw Error(ErrorCode::invalid_input,
              std::string("'") + key + "' must be an integer or [lo, hi]");
}

json range_json(IntRange r) {
  if (r.lo == r.hi) return r.lo;
  return json::array({r.lo, r.hi});
}

std::string fixed(double x, int digits = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << x;
  return s.str();
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::invalid_input, "config must be an object");
  ExperimentConfig cfg;
  static const std::set<std::string> known{
      "n_sensors", "m_cs", "range_over_length", "unequal_ranges", "energy_mean",
      "energy_stddev", "eta_list", "ranges", "trials", "seed", "max_exact_sensors",
      "exact_time_budget_s", "max_attempts", "output"};
  try {
    for (const auto& [key, value] : j.items()) {
      if (!known.count(key)) throw Error(ErrorCode::invalid_input, "unknown config key '" + key + "'");
      if (key == "n_sensors") cfg.n_sensors = int_range(value, "n_sensors");
      else if (key == "m_cs") cfg.m_cs = int_range(value, "m_cs");
      else if (key == "range_over_length") cfg.range_over_length = value.get<double>();
      else if (key == "unequal_ranges") cfg.unequal_ranges = value.get<bool>();
      else if (key == "energy_mean") cfg.energy_mean = value.get<double>();
      else if (key == "energy_stddev") cfg.energy_stddev = value.get<double>();
      else if (key == "eta_list") cfg.eta_list = value.get<std::vector<int>>();
      else if (key == "ranges") cfg.ranges = value.get<std::vector<double>>();
      else if (key == "trials") cfg.trials = value.get<int>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "max_exact_sensors") cfg.max_exact_sensors = value.get<int>();
      else if (key == "exact_time_budget_s")
        cfg.exact_time_budget = std::chrono::milliseconds(
            static_cast<long long>(std::llround(value.get<double>() * 1000.0)));
      else if (key == "max_attempts") cfg.max_attempts = value.get<int>();
      else if (key == "output") cfg.output = value.get<std::string>();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_input, std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

json to_json(const ExperimentConfig& cfg) {
  return json{{"n_sensors", range_json(cfg.n_sensors)},
              {"m_cs", range_json(cfg.m_cs)},
              {"range_over_length", cfg.range_over_length},
              {"unequal_ranges", cfg.unequal_ranges},
              {"energy_mean", cfg.energy_mean},
              {"energy_stddev", cfg.energy_stddev},
              {"eta_list", cfg.eta_list},
              {"ranges", cfg.ranges},
              {"trials", cfg.trials},
              {"seed", cfg.seed},
              {"max_exact_sensors", cfg.max_exact_sensors},
              {"exact_time_budget_s", cfg.exact_time_budget.count() / 1000.0},
              {"max_attempts", cfg.max_attempts}};
}

Instance generate_instance(const ExperimentConfig& cfg, int trial) {
  cfg.validate();
  if (trial < 0) throw Error(ErrorCode::invalid_argument, "negative trial index");
  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    TrialStream rng(cfg.seed, static_cast<std::uint32_t>(trial),
                    static_cast<std::uint32_t>(attempt));
    const int n = rng.uniform_int(cfg.n_sensors.lo, cfg.n_sensors.hi);
    Instance inst;
    inst.m_cs = rng.uniform_int(cfg.m_cs.lo, cfg.m_cs.hi);
    inst.positions.push_back(0.0);
    for (int i = 0; i < n; ++i) inst.positions.push_back(rng.uniform_open());
    std::sort(inst.positions.begin() + 1, inst.positions.end());
    inst.positions.push_back(1.0);
    const double r = cfg.range_over_length;
    for (int i = 0; i < n + 2; ++i) {
      inst.ranges.push_back(cfg.unequal_ranges ? rng.uniform(0.8 * r, 1.2 * r) : r);
    }
    for (int i = 0; i < n; ++i) {
      const double e = std::round(rng.normal(cfg.energy_mean, cfg.energy_stddev));
      inst.energies.push_back(std::max<Energy>(1, static_cast<Energy>(e)));
    }
    const Topology t = inst.topology();
    std::vector<char> all(t.node_count(), 1);
    const auto m_c = min_connected_count(t, std::span<const char>(all));
    if (m_c && inst.m_cs <= n) return inst;
  }
  throw Error(ErrorCode::rejection_exhausted,
              "no connected instance for trial " + std::to_string(trial) + " after " +
                  std::to_string(cfg.max_attempts) + " attempts");
}

Energy all_active_lifetime(const Topology& t, std::span<const Energy> energies,
                           int m_cs) {
  if (static_cast<int>(energies.size()) != t.n_sensors()) {
    throw Error(ErrorCode::length_mismatch, "one energy per sensor");
  }
  std::vector<NodeIndex> all(t.n_sensors());
  for (int i = 0; i < t.n_sensors(); ++i) all[i] = i + 1;
  if (t.n_sensors() < m_cs || !is_connected_induced(t, all)) return 0;
  return *std::min_element(energies.begin(), energies.end());
}

GapReport run_gap_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  GapReport report;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    const Instance inst = generate_instance(cfg, trial);
    const Topology t = inst.topology();
    GapRow row;
    row.trial = trial;
    row.n = t.n_sensors();
    row.m_cs = inst.m_cs;
    const auto greedy = run_energy_balancing(t, inst.energies, inst.m_cs);
    row.t_g = static_cast<Energy>(greedy.lifetime);
    try {
      const auto catalog = enumerate_profiles(t, inst.m_cs, cfg.max_exact_sensors);
      MdkOptions opt;
      opt.time_budget = cfg.exact_time_budget;
      opt.hint = greedy.schedule;
      row.t_max = solve_mdk(catalog, inst.energies, opt).lifetime;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::timeout && e.code() != ErrorCode::too_large) throw;
    }
    if (row.t_max) {
      ++report.histogram[*row.t_max - row.t_g];
    } else {
      ++report.unsolved;
    }
    report.rows.push_back(row);
  }
  return report;
}

std::optional<double> ScaleReport::mean_ratio(int eta) const {
  double sum = 0.0;
  int count = 0;
  for (const auto& r : rows) {
    if (r.eta != eta || r.t_bar_f <= 0) continue;
    sum += static_cast<double>(r.t_g) / static_cast<double>(r.t_bar_f);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

ScaleReport run_scaling_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ScaleReport report;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    const Instance inst = generate_instance(cfg, trial);
    const Topology t = inst.topology();
    for (int eta : cfg.eta_list) {
      std::vector<Energy> e(inst.energies);
      for (auto& x : e) x *= eta;
      ScaleRow row;
      row.trial = trial;
      row.eta = eta;
      row.t_g = static_cast<Energy>(run_energy_balancing(t, e, inst.m_cs).lifetime);
      row.t_bar_f = lifetime_upper_bound(t, e, inst.m_cs, row.t_g);
      report.rows.push_back(row);
    }
  }
  return report;
}

std::vector<SweepRow> run_range_sweep(const ExperimentConfig& cfg,
                                      std::span<const double> ranges) {
  cfg.validate();
  std::vector<SweepRow> out;
  for (double range : ranges) {
    ExperimentConfig c = cfg;
    c.range_over_length = range;
    c.validate();
    SweepRow row;
    row.range = range;
    for (int trial = 0; trial < c.trials; ++trial) {
      const Instance inst = generate_instance(c, trial);
      const Topology t = inst.topology();
      const Energy t_g = static_cast<Energy>(run_energy_balancing(t, inst.energies, inst.m_cs).lifetime);
      row.mean_t_g += static_cast<double>(t_g);
      row.mean_t_bar_f += static_cast<double>(lifetime_upper_bound(t, inst.energies, inst.m_cs, t_g));
      row.mean_baseline += static_cast<double>(all_active_lifetime(t, inst.energies, inst.m_cs));
    }
    row.mean_t_g /= c.trials;
    row.mean_t_bar_f /= c.trials;
    row.mean_baseline /= c.trials;
    out.push_back(row);
  }
  return out;
}

void write_gap_csv(std::ostream& out, const GapReport& r) {
  std::vector<GapRow> rows = r.rows;
  std::sort(rows.begin(), rows.end(), [](const GapRow& a, const GapRow& b) { return a.trial < b.trial; });
  out << "trial,n,m_cs,t_g,t_max,gap\n";
  for (const auto& row : rows) {
    out << row.trial << ',' << row.n << ',' << row.m_cs << ',' << row.t_g << ',';
    if (row.t_max) out << *row.t_max << ',' << (*row.t_max - row.t_g);
    else out << "NA,NA";
    out << '\n';
  }
}

void write_gap_histogram_csv(std::ostream& out, const GapReport& r) {
  out << "gap,count\n";
  for (const auto& [gap, count] : r.histogram) out << gap << ',' << count << '\n';
  if (r.unsolved > 0) out << "NA," << r.unsolved << '\n';
}

void write_scale_csv(std::ostream& out, const ScaleReport& r) {
  std::vector<ScaleRow> rows = r.rows;
  std::stable_sort(rows.begin(), rows.end(), [](const ScaleRow& a, const ScaleRow& b) {
    return a.trial != b.trial ? a.trial < b.trial : a.eta < b.eta;
  });
  out << "trial,eta,t_g,t_bar_f,ratio\n";
  for (const auto& row : rows) {
    out << row.trial << ',' << row.eta << ',' << row.t_g << ',' << row.t_bar_f << ',';
    if (row.t_bar_f > 0) out << fixed(static_cast<double>(row.t_g) / static_cast<double>(row.t_bar_f));
    else out << "NA";
    out << '\n';
  }
}

void write_scale_summary_csv(std::ostream& out, const ScaleReport& r,
                             std::span<const int> etas) {
  out << "eta,mean_ratio\n";
  for (int eta : etas) {
    const auto m = r.mean_ratio(eta);
    out << eta << ',' << (m ? fixed(*m) : std::string("NA")) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "range,mean_t_g,mean_t_bar_f,mean_baseline\n";
  for (const auto& row : rows) {
    out << fixed(row.range, 4) << ',' << fixed(row.mean_t_g, 4) << ','
        << fixed(row.mean_t_bar_f, 4) << ',' << fixed(row.mean_baseline, 4) << '\n';
  }
}

json run_metadata(const ExperimentConfig& cfg, const char* experiment) {
  json j;
  j["experiment"] = experiment;
  j["config"] = to_json(cfg);
  j["generator"] = "philox4x32-10 keyed by seed, counter (block, 0, trial, attempt)";
  j["unequal_ranges"] = cfg.unequal_ranges;
  if (cfg.unequal_ranges) {
    j["warning"] = "per-node ranges differ; t_bar_f is computed over monotone routes only and may not bound the lifetime";
  }
  return j;
}

}  // namespace wsn
