#pragma once

#include <optional>
#include <span>
#include <vector>

#include "wsnlife/schedule.hpp"
#include "wsnlife/simplex.hpp"
#include "wsnlife/topology.hpp"

namespace wsn {

// One arc of the split graph. Internal arcs are v_i^in -> v_i^out with
// capacity E_i; every other arc joins v_a^out to v_b^in for a topology arc
// a -> b with a < b and carries the sentinel capacity.
struct FlowArc {
  int tail = 0;
  int head = 0;
  NodeIndex tail_node = 0;
  NodeIndex head_node = 0;
  bool internal = false;
  Energy capacity = 0;
  Energy flow = 0;
};

// Vertex ids: 0 = s_l, 2i-1 = v_i^in, 2i = v_i^out, 2N+1 = s_r. Value type.
struct FlowNetwork {
  int n_sensors = 0;
  Energy sentinel = 0;  // sum of E_i + 1, stands in for infinite capacity
  std::vector<FlowArc> arcs;

  int vertex_count() const { return 2 * n_sensors + 2; }
  static int in_vertex(NodeIndex i) { return 2 * i - 1; }
  static int out_vertex(NodeIndex i) { return 2 * i; }
  // Vertex that arcs leave from / enter into for topology node v (sinks are
  // single vertices).
  int exit_vertex(NodeIndex v) const { return v == 0 ? 0 : 2 * v; }
  int entry_vertex(NodeIndex v) const {
    return v == n_sensors + 1 ? 2 * n_sensors + 1 : 2 * v - 1;
  }

  std::optional<std::size_t> internal_arc(NodeIndex i) const;
  std::optional<std::size_t> link_arc(NodeIndex a, NodeIndex b) const;
};

// Throws Error{length_mismatch} or Error{invalid_argument} for budgets < 1.
FlowNetwork split_vertices(const Topology& t, std::span<const Energy> energies);

// The T-slot relaxed flow LP is symmetric in its slots: averaging a feasible
// solution over the slots gives a feasible single-slot point with per-node
// flow at most min(1, E_i / T), and repeating such a point T times gives back
// a T-slot solution. This builds that single-slot system. Variables are one
// per link arc, then one per internal arc, in net.arcs order.
LinearSystem averaged_flow_system(const FlowNetwork& net, int m_cs, Energy T);

// Throws Error{invalid_argument} if T < 1 or m_cs < 1, propagates
// Error{numerical_failure} from the simplex.
bool lp_feasible(const FlowNetwork& net, int m_cs, Energy T);

// Largest T with lp_feasible, searched upward from lower_hint and bisected
// below floor(sum E / m*), m* = max(m_cs, M_c). 0 when T = 1 is infeasible.
Energy lifetime_upper_bound(const Topology& t, std::span<const Energy> energies,
                            int m_cs, Energy lower_hint = 0);

// Adds one unit along each slot's left-to-right route. Throws
// Error{capacity_violation} when a sensor is overdrawn and
// Error{invalid_argument} when a slot is not a monotone route.
FlowNetwork load_schedule_flows(FlowNetwork net, const Schedule& s);

struct ResidualStep {
  std::size_t arc = 0;
  bool forward = true;
};

struct ResidualRoute {
  std::vector<ResidualStep> steps;
  Energy increment = 0;
  int forward_internal = 0;  // sensors whose own arc is crossed forward

  bool has_backward_internal(const FlowNetwork& net) const;
  int backward_count() const;
};

// Exhaustive search for a simple s_l -> s_r path in the residual network that
// uses at least one arc backward and crosses at least m_cs internal arcs
// forward. Backward internal arcs are allowed by the search. Throws
// Error{too_large} above max_sensors.
std::optional<ResidualRoute> find_backward_augmenting_route(
    const FlowNetwork& net, int m_cs, int max_sensors = 14);

enum class CertificateKind { optimal, improvable, unknown };

struct Certificate {
  CertificateKind kind = CertificateKind::unknown;
  std::optional<ResidualRoute> route;
  std::optional<Schedule> improved;  // set for improvable: original + 1 slot
};

// Throws Error{invalid_input} for an infeasible schedule and Error{too_large}
// above max_sensors.
Certificate certify_schedule(const Topology& t, std::span<const Energy> energies,
                             int m_cs, const Schedule& s, int max_sensors = 14);

}  // namespace wsn
