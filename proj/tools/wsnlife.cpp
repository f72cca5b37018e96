// wsnlife: schedule a linear two-sink sensor network and run the experiments.
//
//   wsnlife solve --config instance.json --out dir [--exact] [--bound] [--certify]
//   wsnlife gap   --config cfg.json --out dir [--seed S]
//   wsnlife scale --config cfg.json --out dir [--seed S]
//   wsnlife sweep --config cfg.json --out dir [--seed S]
//
// Exit status: 0 ok, 1 invalid input, 2 guard or timeout.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "wsnlife/balancer.hpp"
#include "wsnlife/errors.hpp"
#include "wsnlife/exact.hpp"
#include "wsnlife/flowbound.hpp"
#include "wsnlife/harness.hpp"
#include "wsnlife/instance_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Common {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--seed", c.seed, "overrides the config seed");
}

int exit_code(wsn::ErrorCode code) {
  switch (code) {
    case wsn::ErrorCode::too_large:
    case wsn::ErrorCode::timeout:
    case wsn::ErrorCode::rejection_exhausted:
      return 2;
    default:
      return 1;
  }
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p);
  if (!out) throw wsn::Error(wsn::ErrorCode::invalid_input, "cannot write " + p.string());
  out << s;
}

wsn::ExperimentConfig load_config(const Common& c) {
  auto cfg = wsn::config_from_json(wsn::load_json(c.config));
  if (c.seed) cfg.seed = *c.seed;
  cfg.output = c.out;
  fs::create_directories(cfg.output);
  return cfg;
}

int run_solve(const Common& c, bool exact, bool bound, bool certify, double budget_s) {
  const wsn::Instance inst = wsn::load_instance(c.config);
  const wsn::Topology t = inst.topology();
  if (static_cast<int>(inst.energies.size()) != t.n_sensors()) {
    throw wsn::Error(wsn::ErrorCode::length_mismatch, "energies must list one value per sensor");
  }
  fs::create_directories(c.out);

  const auto greedy = wsn::run_energy_balancing(t, inst.energies, inst.m_cs);
  json summary{{"n_sensors", t.n_sensors()}, {"m_cs", inst.m_cs}, {"t_g", greedy.lifetime}};
  wsn::save_json(fs::path(c.out) / "schedule.json", wsn::to_json(greedy.schedule));
  std::cout << "T_G = " << greedy.lifetime << '\n';

  int status = 0;
  if (exact) {
    try {
      const auto catalog = wsn::enumerate_profiles(t, inst.m_cs);
      wsn::MdkOptions opt;
      opt.time_budget = std::chrono::milliseconds(static_cast<long long>(budget_s * 1000));
      opt.hint = greedy.schedule;
      const auto sol = wsn::solve_mdk(catalog, inst.energies, opt);
      summary["t_max"] = sol.lifetime;
      wsn::save_json(fs::path(c.out) / "optimal_schedule.json",
                     wsn::to_json(wsn::schedule_from_mdk(sol, catalog, inst.energies)));
      std::cout << "T_max = " << sol.lifetime << '\n';
    } catch (const wsn::Error& e) {
      if (exit_code(e.code()) != 2) throw;
      summary["t_max"] = nullptr;
      std::cerr << "exact: " << e.what() << '\n';
      status = 2;
    }
  }
  if (bound) {
    const auto ub = wsn::lifetime_upper_bound(t, inst.energies, inst.m_cs,
                                              static_cast<wsn::Energy>(greedy.lifetime));
    summary["t_bar_f"] = ub;
    std::cout << "T_bar_f = " << ub << '\n';
  }
  if (certify) {
    try {
      const auto cert = wsn::certify_schedule(t, inst.energies, inst.m_cs, greedy.schedule);
      const char* kind = cert.kind == wsn::CertificateKind::optimal      ? "optimal"
                         : cert.kind == wsn::CertificateKind::improvable ? "improvable"
                                                                          : "unknown";
      summary["certificate"] = kind;
      if (cert.improved) summary["improved_schedule"] = wsn::to_json(*cert.improved);
      std::cout << "certificate = " << kind << '\n';
    } catch (const wsn::Error& e) {
      if (exit_code(e.code()) != 2) throw;
      summary["certificate"] = nullptr;
      std::cerr << "certify: " << e.what() << '\n';
      status = 2;
    }
  }
  wsn::save_json(fs::path(c.out) / "summary.json", summary);
  return status;
}

int run_gap(const Common& c) {
  const auto cfg = load_config(c);
  const auto report = wsn::run_gap_experiment(cfg);
  std::ostringstream rows, hist;
  wsn::write_gap_csv(rows, report);
  wsn::write_gap_histogram_csv(hist, report);
  write_text(cfg.output / "gap.csv", rows.str());
  write_text(cfg.output / "gap_histogram.csv", hist.str());
  wsn::save_json(cfg.output / "metadata.json", wsn::run_metadata(cfg, "gap"));
  std::cout << hist.str();
  const bool none_solved = report.unsolved == static_cast<int>(report.rows.size());
  return none_solved ? 2 : 0;
}

int run_scale(const Common& c) {
  const auto cfg = load_config(c);
  const auto report = wsn::run_scaling_experiment(cfg);
  std::ostringstream rows, summary;
  wsn::write_scale_csv(rows, report);
  wsn::write_scale_summary_csv(summary, report, cfg.eta_list);
  write_text(cfg.output / "scale.csv", rows.str());
  write_text(cfg.output / "scale_summary.csv", summary.str());
  wsn::save_json(cfg.output / "metadata.json", wsn::run_metadata(cfg, "scale"));
  std::cout << summary.str();
  return 0;
}

int run_sweep(const Common& c) {
  const auto cfg = load_config(c);
  const auto rows = wsn::run_range_sweep(cfg, cfg.ranges);
  std::ostringstream out;
  wsn::write_sweep_csv(out, rows);
  write_text(cfg.output / "sweep.csv", out.str());
  wsn::save_json(cfg.output / "metadata.json", wsn::run_metadata(cfg, "sweep"));
  std::cout << out.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifetime scheduling for linear two-sink sensor networks"};
  app.require_subcommand(1);

  Common solve_opts, gap_opts, scale_opts, sweep_opts;
  bool exact = false, bound = false, certify = false;
  double budget_s = 60.0;
  auto* solve = app.add_subcommand("solve", "schedule one instance file");
  add_common(solve, solve_opts);
  solve->add_flag("--exact", exact, "also compute T_max by branch and bound");
  solve->add_flag("--bound", bound, "also compute the LP flow bound");
  solve->add_flag("--certify", certify, "look for a backward augmenting route");
  solve->add_option("--time-budget", budget_s, "seconds for the exact solver");
  auto* gap = app.add_subcommand("gap", "greedy vs exact lifetime gap");
  add_common(gap, gap_opts);
  auto* scale = app.add_subcommand("scale", "ratio to the flow bound as energy scales");
  add_common(scale, scale_opts);
  auto* sweep = app.add_subcommand("sweep", "lifetime against transmission range");
  add_common(sweep, sweep_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*solve) return run_solve(solve_opts, exact, bound, certify, budget_s);
    if (*gap) return run_gap(gap_opts);
    if (*scale) return run_scale(scale_opts);
    if (*sweep) return run_sweep(sweep_opts);
  } catch (const wsn::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
