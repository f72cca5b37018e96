#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "wsnlife/instance_io.hpp"

namespace wsn {

// Philox4x32-10 (Salmon et al., SC'11): a counter-based generator, so the
// words for (seed, trial, attempt) are computed directly, with no shared
// state between trials.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

class TrialStream {
 public:
  TrialStream(std::uint64_t seed, std::uint32_t trial, std::uint32_t attempt);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  double uniform_open();                          // in (0, 1)
  double uniform(double lo, double hi);           // in (lo, hi)
  int uniform_int(int lo, int hi);                // in [lo, hi]
  double normal(double mean, double stddev);      // Box-Muller

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t trial_;
  std::uint32_t attempt_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int used_ = 4;
  std::optional<double> spare_;
};

struct IntRange {
  int lo = 1;
  int hi = 1;
};

struct ExperimentConfig {
  IntRange n_sensors{20, 20};
  IntRange m_cs{7, 7};
  double range_over_length = 0.25;
  bool unequal_ranges = false;  // per-node ranges uniform in [0.8, 1.2] r
  double energy_mean = 50.0;
  double energy_stddev = 5.0;
  std::vector<int> eta_list{1, 2, 10, 20};
  std::vector<double> ranges{0.1, 0.15, 0.2, 0.25, 0.3};
  int trials = 50;
  std::uint64_t seed = 1;
  int max_exact_sensors = 20;
  std::chrono::milliseconds exact_time_budget{60'000};
  int max_attempts = 1000;
  std::filesystem::path output = "out";

  // Throws Error{invalid_input}.
  void validate() const;
};

// Unknown keys are rejected so typos do not silently fall back to defaults.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& cfg);

// Sorted uniform positions in (0,1), sinks at 0 and 1, Gaussian energies
// rounded and clamped to >= 1. Instances without any sink-to-sink route are
// resampled from the next attempt's stream; Error{rejection_exhausted} after
// cfg.max_attempts.
Instance generate_instance(const ExperimentConfig& cfg, int trial);

// Every sensor on in every slot, as a data-gathering scheme that needs all
// nodes would do. The network dies with its first depleted sensor, or at once
// if the all-on network is disconnected or smaller than m_cs.
Energy all_active_lifetime(const Topology& t, std::span<const Energy> energies,
                           int m_cs);

struct GapRow {
  int trial = 0;
  int n = 0;
  int m_cs = 0;
  Energy t_g = 0;
  std::optional<Energy> t_max;  // empty on timeout or guard
};

struct GapReport {
  std::vector<GapRow> rows;
  std::map<Energy, int> histogram;
  int unsolved = 0;
};

GapReport run_gap_experiment(const ExperimentConfig& cfg);

struct ScaleRow {
  int trial = 0;
  int eta = 1;
  Energy t_g = 0;
  Energy t_bar_f = 0;
};

struct ScaleReport {
  std::vector<ScaleRow> rows;

  // Mean of t_g / t_bar_f over the rows of one eta with t_bar_f > 0.
  std::optional<double> mean_ratio(int eta) const;
};

ScaleReport run_scaling_experiment(const ExperimentConfig& cfg);

struct SweepRow {
  double range = 0.0;
  double mean_t_g = 0.0;
  double mean_t_bar_f = 0.0;
  double mean_baseline = 0.0;
};

std::vector<SweepRow> run_range_sweep(const ExperimentConfig& cfg,
                                      std::span<const double> ranges);

void write_gap_csv(std::ostream& out, const GapReport& r);
void write_gap_histogram_csv(std::ostream& out, const GapReport& r);
void write_scale_csv(std::ostream& out, const ScaleReport& r);
void write_scale_summary_csv(std::ostream& out, const ScaleReport& r,
                             std::span<const int> etas);
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

// Run description written next to the CSVs; marks unequal-range runs, whose
// flow bound only covers monotone routes.
nlohmann::json run_metadata(const ExperimentConfig& cfg, const char* experiment);

}  // namespace wsn
