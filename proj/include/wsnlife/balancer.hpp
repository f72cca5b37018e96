#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wsnlife/schedule.hpp"
#include "wsnlife/topology.hpp"

namespace wsn {

// Preference among children whose DP values are exactly equal: the child
// with the lowest rank wins. An empty rank vector means rank == node index,
// which makes the chosen profile the lexicographically smallest optimum.
// Other rankings exist so tests can drive the scheduler down a bad branch.
struct TieBreak {
  std::vector<int> rank;

  int of(NodeIndex v) const {
    return rank.empty() ? v : rank.at(static_cast<std::size_t>(v));
  }
};

struct DpChoice {
  ActivationProfile profile;
  Rational value;  // sum of normalized residual energies, exact
};

// Best route of exactly m connected candidate sensors, maximizing the sum of
// normalized residual energy:
//
//   g(v,k) = max_{u in N'_(v)} g(u,k-1) + p_u,   g(v,0) = 0 iff v reaches s_r
//
// where N'_(v) are the candidate sensors downstream of v. Returns nullopt when
// g(s_l, m) = -inf. Throws Error{invalid_argument} if m < 1.
std::optional<DpChoice> dp_best_profile(const Topology& t,
                                        const EnergyState& energy, int m,
                                        const TieBreak& tie = {});

// One timeslot of energy balancing: m = max(M_c, m_cs) over the current
// candidates, then the DP. nullopt means the network has expired.
std::optional<ActivationProfile> select_activation(const Topology& t,
                                                   const EnergyState& energy,
                                                   int m_cs,
                                                   const TieBreak& tie = {});

struct BalancingResult {
  std::size_t lifetime = 0;
  Schedule schedule;
};

// Repeats select_activation, charging one unit per active sensor per slot,
// until the network expires.
BalancingResult run_energy_balancing(const Topology& t,
                                     std::span<const Energy> initial, int m_cs,
                                     const TieBreak& tie = {});

}  // namespace wsn
