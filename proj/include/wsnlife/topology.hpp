#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace wsn {

// Node 0 is the left sink, node N+1 the right sink and 1..N are the sensors
// ordered left to right along the line.
using NodeIndex = int;

// Linear deployment of N sensors between two sinks.
//
// Node i can transmit to node j iff |x_i - x_j| <= r_i, so adjacency is
// directed when ranges differ and symmetric when they are all equal. Index
// order equals spatial order, which the downstream recursions rely on.
// Immutable after construction.
class Topology {
 public:
  // Throws Error{length_mismatch | unsorted_positions | non_positive_range |
  // invalid_argument}.
  static Topology build(std::vector<double> positions,
                        std::vector<double> ranges);

  int n_sensors() const noexcept { return n_sensors_; }
  int node_count() const noexcept { return n_sensors_ + 2; }
  NodeIndex left_sink() const noexcept { return 0; }
  NodeIndex right_sink() const noexcept { return n_sensors_ + 1; }
  bool is_sensor(NodeIndex i) const noexcept {
    return i >= 1 && i <= n_sensors_;
  }

  std::span<const double> positions() const noexcept { return positions_; }
  std::span<const double> ranges() const noexcept { return ranges_; }
  bool uniform_ranges() const noexcept { return uniform_ranges_; }

  // True iff i reaches j: |x_i - x_j| <= r_i.
  bool has_arc(NodeIndex i, NodeIndex j) const;

  // All nodes reachable from i (both directions), ascending.
  std::vector<NodeIndex> neighbors(NodeIndex i) const;

  // Reachable nodes with a larger index, ascending.
  std::span<const NodeIndex> downstream(NodeIndex i) const;

 private:
  Topology() = default;
  void check_index(NodeIndex i) const;

  int n_sensors_ = 0;
  bool uniform_ranges_ = true;
  std::vector<double> positions_;
  std::vector<double> ranges_;
  std::vector<std::vector<NodeIndex>> downstream_;
};

// Whether the graph induced by `active` plus both sinks is connected (arcs
// taken in either direction). Breadth-first search.
bool is_connected_induced(const Topology& t, std::span<const NodeIndex> active);

// Smallest number of candidate sensors on a left-to-right sink route that
// only moves through candidates; nullopt when no such route exists.
// `candidate_mask` has node_count() entries; sink entries are ignored.
std::optional<int> min_connected_count(const Topology& t,
                                       std::span<const char> candidate_mask);
std::optional<int> min_connected_count(const Topology& t,
                                       std::span<const NodeIndex> candidates);

// Sensor set -> membership mask over all node indices. Throws
// Error{index_out_of_range} for anything that is not a sensor index.
std::vector<char> sensor_mask(const Topology& t,
                              std::span<const NodeIndex> sensors);

// True iff `sensors` (any order) visited left to right forms a route
// s_l -> ... -> s_r along downstream arcs.
bool is_monotone_route(const Topology& t, std::span<const NodeIndex> sensors);

}  // namespace wsn
