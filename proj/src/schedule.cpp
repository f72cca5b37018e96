#include "wsnlife/schedule.hpp"

#include <algorithm>

#include "wsnlife/errors.hpp"

namespace wsn {

EnergyState::EnergyState(std::vector<Energy> initial)
    : initial_(std::move(initial)), residual_(initial_) {
  for (std::size_t i = 0; i < initial_.size(); ++i) {
    if (initial_[i] < 1) {
      throw Error(ErrorCode::invalid_argument,
                  "initial energy of sensor " + std::to_string(i + 1) +
                      " must be >= 1");
    }
  }
}

int EnergyState::candidate_count() const noexcept {
  return static_cast<int>(
      std::count_if(residual_.begin(), residual_.end(),
                    [](Energy e) { return e >= 1; }));
}

void EnergyState::consume(std::span<const NodeIndex> sensors) {
  for (NodeIndex s : sensors) {
    if (s < 1 || s > n_sensors()) {
      throw Error(ErrorCode::index_out_of_range,
                  "sensor " + std::to_string(s));
    }
    if (residual_[s - 1] < 1) {
      throw Error(ErrorCode::capacity_violation,
                  "sensor " + std::to_string(s) + " is depleted");
    }
  }
  std::vector<NodeIndex> sorted(sensors.begin(), sensors.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::invalid_argument, "sensor listed twice in one slot");
  }
  for (NodeIndex s : sensors) --residual_[s - 1];
}

std::vector<Energy> usage_counts(int n_sensors, const Schedule& s) {
  std::vector<Energy> used(n_sensors, 0);
  for (const auto& slot : s.slots) {
    for (NodeIndex v : slot.nodes) {
      if (v < 1 || v > n_sensors) {
        throw Error(ErrorCode::index_out_of_range,
                    "sensor " + std::to_string(v));
      }
      ++used[v - 1];
    }
  }
  return used;
}

std::optional<std::string> schedule_violation(const Topology& t,
                                              std::span<const Energy> initial,
                                              int m_cs, const Schedule& s) {
  if (static_cast<int>(initial.size()) != t.n_sensors()) {
    return "energy list length does not match sensor count";
  }
  std::vector<Energy> used(t.n_sensors(), 0);
  for (std::size_t k = 0; k < s.slots.size(); ++k) {
    const auto& nodes = s.slots[k].nodes;
    const std::string where = "slot " + std::to_string(k) + ": ";
    if (!std::is_sorted(nodes.begin(), nodes.end()) ||
        std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
      return where + "profile is not a strictly ascending sensor list";
    }
    for (NodeIndex v : nodes) {
      if (!t.is_sensor(v)) return where + "index " + std::to_string(v) + " is not a sensor";
      ++used[v - 1];
    }
    if (static_cast<int>(nodes.size()) < m_cs) {
      return where + "fewer than m_cs sensors";
    }
    if (!is_connected_induced(t, nodes)) {
      return where + "induced graph is disconnected";
    }
  }
  for (int i = 0; i < t.n_sensors(); ++i) {
    if (used[i] > initial[i]) {
      return "sensor " + std::to_string(i + 1) + " used " +
             std::to_string(used[i]) + " times with budget " +
             std::to_string(initial[i]);
    }
  }
  return std::nullopt;
}

}  // namespace wsn
