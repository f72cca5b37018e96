#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <vector>

#include "wsnlife/schedule.hpp"
#include "wsnlife/topology.hpp"

namespace wsn {

// Feasible activation profiles, one column each. usage_index[i-1] lists the
// profiles that contain sensor i.
struct ProfileCatalog {
  int n_sensors = 0;
  std::vector<ActivationProfile> profiles;
  std::vector<std::vector<std::size_t>> usage_index;
};

// Validates and indexes a profile list (sorted by size, then lexicographic,
// duplicates rejected). Throws Error{invalid_argument | index_out_of_range}.
ProfileCatalog make_catalog(int n_sensors, std::vector<ActivationProfile> profiles);

// Every monotone s_l -> s_r route with at least m_cs sensors. Throws
// Error{too_large} when N > max_sensors, Error{invalid_argument} if m_cs < 1.
ProfileCatalog enumerate_profiles(const Topology& t, int m_cs,
                                  int max_sensors = 20);

// Drops each profile that still contains a catalog profile after removing one
// of its sensors. Any schedule can swap such a profile for the smaller one
// without losing a slot, so the optimum is unchanged.
ProfileCatalog remove_dominated(const ProfileCatalog& catalog);

struct MdkSolution {
  std::vector<Energy> counts;  // z_l, aligned with catalog.profiles
  Energy lifetime = 0;
};

struct MdkOptions {
  std::chrono::milliseconds time_budget{60'000};
  // Any feasible schedule (typically the balancer's). Only a starting
  // incumbent; ignored when it does not fit the budgets.
  Schedule hint;
};

// max sum(z) s.t. Q z <= E, z integer >= 0, by depth-first branch and bound.
// Throws Error{timeout} when the budget runs out, Error{length_mismatch} if
// energies does not have one entry per sensor.
MdkSolution solve_mdk(const ProfileCatalog& catalog,
                      std::span<const Energy> energies,
                      const MdkOptions& options = {});

// Profile l repeated counts[l] times, in catalog order. Throws
// Error{infeasible_solution} if the result overdraws any budget.
Schedule schedule_from_mdk(const MdkSolution& sol, const ProfileCatalog& catalog,
                           std::span<const Energy> energies);

}  // namespace wsn
