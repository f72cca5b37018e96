#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "wsnlife/topology.hpp"

namespace wsn {

using Rational = boost::multiprecision::cpp_rational;
using Energy = std::int64_t;

// Per-sensor budgets counted in activation slots. Indexed by sensor index
// 1..N; both vectors store sensor i at position i-1.
class EnergyState {
 public:
  // Throws Error{invalid_argument} unless every initial budget is >= 1.
  explicit EnergyState(std::vector<Energy> initial);

  int n_sensors() const noexcept { return static_cast<int>(initial_.size()); }
  Energy initial(NodeIndex sensor) const { return initial_.at(sensor - 1); }
  Energy residual(NodeIndex sensor) const { return residual_.at(sensor - 1); }
  std::span<const Energy> initial() const noexcept { return initial_; }
  std::span<const Energy> residual() const noexcept { return residual_; }

  // Candidates are sensors that can still afford one slot.
  bool is_candidate(NodeIndex sensor) const { return residual(sensor) >= 1; }
  int candidate_count() const noexcept;

  // p_i = E_i(t) / E_i, exact.
  Rational normalized(NodeIndex sensor) const {
    return Rational(residual(sensor), initial(sensor));
  }
  double normalized_approx(NodeIndex sensor) const {
    return static_cast<double>(residual(sensor)) /
           static_cast<double>(initial(sensor));
  }

  // Spends one slot of every listed sensor. Throws Error{capacity_violation}
  // if any of them is already depleted and Error{invalid_argument} for a
  // repeated sensor; the state is unchanged on throw.
  void consume(std::span<const NodeIndex> sensors);

 private:
  std::vector<Energy> initial_;
  std::vector<Energy> residual_;
};

// Sensors switched on together in one slot, ascending.
struct ActivationProfile {
  std::vector<NodeIndex> nodes;

  std::size_t size() const noexcept { return nodes.size(); }
  friend bool operator==(const ActivationProfile&,
                         const ActivationProfile&) = default;
  friend auto operator<=>(const ActivationProfile&,
                          const ActivationProfile&) = default;
};

struct Schedule {
  std::vector<ActivationProfile> slots;

  std::size_t lifetime() const noexcept { return slots.size(); }
  friend bool operator==(const Schedule&, const Schedule&) = default;
};

// Checks every slot for connectivity and cardinality and the whole schedule
// against the energy budgets. Returns a description of the first violation,
// or nullopt when the schedule is valid.
std::optional<std::string> schedule_violation(const Topology& t,
                                              std::span<const Energy> initial,
                                              int m_cs, const Schedule& s);

// Number of slots each sensor is active in; index i-1 holds sensor i.
std::vector<Energy> usage_counts(int n_sensors, const Schedule& s);

}  // namespace wsn
