#include "wsnlife/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "wsnlife/errors.hpp"

namespace wsn {

Topology Topology::build(std::vector<double> positions,
                         std::vector<double> ranges) {
  if (positions.size() != ranges.size()) {
    throw Error(ErrorCode::length_mismatch,
                "positions has " + std::to_string(positions.size()) +
                    " entries, ranges has " + std::to_string(ranges.size()));
  }
  if (positions.size() < 3) {
    throw Error(ErrorCode::length_mismatch,
                "need both sinks and at least one sensor");
  }
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!std::isfinite(positions[i])) {
      throw Error(ErrorCode::invalid_argument, "non-finite position");
    }
    if (i > 0 && positions[i] < positions[i - 1]) {
      throw Error(ErrorCode::unsorted_positions,
                  "position " + std::to_string(i) + " precedes its left neighbour");
    }
    if (!(ranges[i] > 0.0) || !std::isfinite(ranges[i])) {
      throw Error(ErrorCode::non_positive_range,
                  "range of node " + std::to_string(i) + " must be positive");
    }
  }
  if (positions.front() != 0.0 || positions.back() != 1.0) {
    throw Error(ErrorCode::invalid_argument,
                "sinks must sit at normalized positions 0 and 1");
  }

  Topology t;
  t.n_sensors_ = static_cast<int>(positions.size()) - 2;
  t.uniform_ranges_ = std::all_of(ranges.begin(), ranges.end(),
                                  [&](double r) { return r == ranges.front(); });
  t.positions_ = std::move(positions);
  t.ranges_ = std::move(ranges);

  const int n = t.node_count();
  t.downstream_.resize(n);
  for (NodeIndex i = 0; i < n; ++i) {
    for (NodeIndex j = i + 1; j < n; ++j) {
      // Sorted positions: once j is out of reach, so is everything after it.
      if (t.positions_[j] - t.positions_[i] > t.ranges_[i]) break;
      t.downstream_[i].push_back(j);
    }
  }
  return t;
}

void Topology::check_index(NodeIndex i) const {
  if (i < 0 || i >= node_count()) {
    throw Error(ErrorCode::index_out_of_range,
                "node " + std::to_string(i) + " not in [0, " +
                    std::to_string(node_count() - 1) + "]");
  }
}

bool Topology::has_arc(NodeIndex i, NodeIndex j) const {
  check_index(i);
  check_index(j);
  if (i == j) return false;
  return std::abs(positions_[i] - positions_[j]) <= ranges_[i];
}

std::vector<NodeIndex> Topology::neighbors(NodeIndex i) const {
  check_index(i);
  std::vector<NodeIndex> out;
  for (NodeIndex j = 0; j < node_count(); ++j) {
    if (j != i && std::abs(positions_[i] - positions_[j]) <= ranges_[i]) {
      out.push_back(j);
    }
  }
  return out;
}

std::span<const NodeIndex> Topology::downstream(NodeIndex i) const {
  check_index(i);
  return downstream_[i];
}

std::vector<char> sensor_mask(const Topology& t,
                              std::span<const NodeIndex> sensors) {
  std::vector<char> mask(t.node_count(), 0);
  for (NodeIndex s : sensors) {
    if (!t.is_sensor(s)) {
      throw Error(ErrorCode::index_out_of_range,
                  "sensor index " + std::to_string(s) + " out of range");
    }
    mask[s] = 1;
  }
  return mask;
}

bool is_connected_induced(const Topology& t,
                          std::span<const NodeIndex> active) {
  std::vector<char> in_graph = sensor_mask(t, active);
  in_graph[t.left_sink()] = 1;
  in_graph[t.right_sink()] = 1;

  const int n = t.node_count();
  std::vector<char> seen(n, 0);
  std::deque<NodeIndex> queue{t.left_sink()};
  seen[t.left_sink()] = 1;
  while (!queue.empty()) {
    const NodeIndex u = queue.front();
    queue.pop_front();
    for (NodeIndex v = 0; v < n; ++v) {
      if (!in_graph[v] || seen[v]) continue;
      if (t.has_arc(u, v) || t.has_arc(v, u)) {
        seen[v] = 1;
        queue.push_back(v);
      }
    }
  }
  for (NodeIndex v = 0; v < n; ++v) {
    if (in_graph[v] && !seen[v]) return false;
  }
  return true;
}

std::optional<int> min_connected_count(const Topology& t,
                                       std::span<const char> candidate_mask) {
  const int n = t.node_count();
  if (static_cast<int>(candidate_mask.size()) != n) {
    throw Error(ErrorCode::length_mismatch, "candidate mask size");
  }
  // Arcs only point rightwards, so one sweep in index order is a BFS.
  constexpr int unreached = -1;
  std::vector<int> hops(n, unreached);
  hops[t.left_sink()] = 0;
  for (NodeIndex u = 0; u < t.right_sink(); ++u) {
    if (hops[u] == unreached) continue;
    for (NodeIndex v : t.downstream(u)) {
      if (v != t.right_sink() && !candidate_mask[v]) continue;
      if (hops[v] == unreached || hops[u] + 1 < hops[v]) hops[v] = hops[u] + 1;
    }
  }
  if (hops[t.right_sink()] == unreached) return std::nullopt;
  return hops[t.right_sink()] - 1;
}

std::optional<int> min_connected_count(const Topology& t,
                                       std::span<const NodeIndex> candidates) {
  const std::vector<char> mask = sensor_mask(t, candidates);
  return min_connected_count(t, std::span<const char>(mask));
}

bool is_monotone_route(const Topology& t, std::span<const NodeIndex> sensors) {
  std::vector<NodeIndex> path(sensors.begin(), sensors.end());
  for (NodeIndex s : path) {
    if (!t.is_sensor(s)) return false;
  }
  std::sort(path.begin(), path.end());
  if (std::adjacent_find(path.begin(), path.end()) != path.end()) return false;
  NodeIndex prev = t.left_sink();
  for (NodeIndex s : path) {
    if (!t.has_arc(prev, s)) return false;
    prev = s;
  }
  return t.has_arc(prev, t.right_sink());
}

}  // namespace wsn
