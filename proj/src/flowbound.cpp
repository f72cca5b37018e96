#include "wsnlife/flowbound.hpp"

#include <algorithm>
#include <numeric>

#include "wsnlife/errors.hpp"

namespace wsn {

std::optional<std::size_t> FlowNetwork::internal_arc(NodeIndex i) const {
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    if (arcs[k].internal && arcs[k].tail_node == i) return k;
  }
  return std::nullopt;
}

std::optional<std::size_t> FlowNetwork::link_arc(NodeIndex a, NodeIndex b) const {
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    if (!arcs[k].internal && arcs[k].tail_node == a && arcs[k].head_node == b) return k;
  }
  return std::nullopt;
}

FlowNetwork split_vertices(const Topology& t, std::span<const Energy> energies) {
  if (static_cast<int>(energies.size()) != t.n_sensors()) {
    throw Error(ErrorCode::length_mismatch,
                "expected " + std::to_string(t.n_sensors()) + " energies");
  }
  FlowNetwork net;
  net.n_sensors = t.n_sensors();
  net.sentinel = 1;
  for (Energy e : energies) {
    if (e < 1) throw Error(ErrorCode::invalid_argument, "energies must be >= 1");
    net.sentinel += e;
  }
  for (NodeIndex a = 0; a <= t.n_sensors(); ++a) {
    if (a >= 1) {
      net.arcs.push_back({FlowNetwork::in_vertex(a), FlowNetwork::out_vertex(a), a, a,
                          true, energies[a - 1], 0});
    }
    for (NodeIndex b : t.downstream(a)) {
      net.arcs.push_back({net.exit_vertex(a), net.entry_vertex(b), a, b, false,
                          net.sentinel, 0});
    }
  }
  return net;
}

LinearSystem averaged_flow_system(const FlowNetwork& net, int m_cs, Energy T) {
  if (T < 1) throw Error(ErrorCode::invalid_argument, "T must be >= 1");
  if (m_cs < 1) throw Error(ErrorCode::invalid_argument, "m_cs must be >= 1");
  const int n = net.n_sensors;
  LinearSystem sys;
  sys.n_vars = static_cast<int>(net.arcs.size());

  std::vector<std::vector<std::pair<int, double>>> into(n + 2), out_of(n + 2);
  std::vector<std::pair<int, double>> source, total;
  for (std::size_t k = 0; k < net.arcs.size(); ++k) {
    const auto& a = net.arcs[k];
    const int var = static_cast<int>(k);
    if (a.internal) {
      into[a.tail_node].emplace_back(var, -1.0);
      out_of[a.tail_node].emplace_back(var, 1.0);
      total.emplace_back(var, 1.0);
      const double cap = std::min(1.0, static_cast<double>(a.capacity) /
                                           static_cast<double>(T));
      sys.add_row({{var, 1.0}}, RowSense::le, cap);
    } else {
      if (a.tail_node == 0) source.emplace_back(var, 1.0);
      if (a.head_node <= n) into[a.head_node].emplace_back(var, 1.0);
      if (a.tail_node >= 1) out_of[a.tail_node].emplace_back(var, -1.0);
    }
  }
  sys.add_row(std::move(source), RowSense::eq, 1.0);
  for (NodeIndex i = 1; i <= n; ++i) {
    sys.add_row(std::move(into[i]), RowSense::eq, 0.0);
    sys.add_row(std::move(out_of[i]), RowSense::eq, 0.0);
  }
  sys.add_row(std::move(total), RowSense::ge, static_cast<double>(m_cs));
  return sys;
}

bool lp_feasible(const FlowNetwork& net, int m_cs, Energy T) {
  return check_feasibility(averaged_flow_system(net, m_cs, T)).feasible;
}

Energy lifetime_upper_bound(const Topology& t, std::span<const Energy> energies,
                            int m_cs, Energy lower_hint) {
  if (m_cs < 1) throw Error(ErrorCode::invalid_argument, "m_cs must be >= 1");
  const FlowNetwork net = split_vertices(t, energies);
  std::vector<char> all(t.node_count(), 1);
  const auto m_c = min_connected_count(t, std::span<const char>(all));
  if (!m_c) return 0;
  const Energy m_star = std::max(*m_c, m_cs);
  const Energy hi = std::accumulate(energies.begin(), energies.end(), Energy{0}) / m_star;
  if (hi < 1) return 0;

  auto feasible = [&](Energy T) { return lp_feasible(net, m_cs, T); };
  Energy lo = std::clamp<Energy>(lower_hint, 1, hi);
  if (!feasible(lo)) {
    if (lo == 1 || !feasible(1)) return 0;
    lo = 1;
  }
  // Gallop upward from the feasible point, then bisect (lo feasible,
  // bad infeasible or past hi).
  Energy step = 1;
  Energy bad = hi + 1;
  while (lo < hi) {
    const Energy probe = std::min(lo + step, hi);
    if (!feasible(probe)) {
      bad = probe;
      break;
    }
    lo = probe;
    step *= 2;
  }
  while (bad - lo > 1) {
    const Energy mid = lo + (bad - lo) / 2;
    if (feasible(mid)) lo = mid;
    else bad = mid;
  }
  return lo;
}

FlowNetwork load_schedule_flows(FlowNetwork net, const Schedule& s) {
  const int n = net.n_sensors;
  for (std::size_t k = 0; k < s.slots.size(); ++k) {
    std::vector<NodeIndex> route = s.slots[k].nodes;
    std::sort(route.begin(), route.end());
    route.insert(route.begin(), 0);
    route.push_back(n + 1);
    for (std::size_t p = 0; p + 1 < route.size(); ++p) {
      const NodeIndex a = route[p];
      const NodeIndex b = route[p + 1];
      if (b < 1 || b > n + 1 || a == b) {
        throw Error(ErrorCode::invalid_argument,
                    "slot " + std::to_string(k) + " has a bad sensor index");
      }
      const auto link = net.link_arc(a, b);
      if (!link) {
        throw Error(ErrorCode::invalid_argument,
                    "slot " + std::to_string(k) + " is not a monotone route");
      }
      ++net.arcs[*link].flow;
      if (b <= n) {
        auto& inner = net.arcs[*net.internal_arc(b)];
        if (++inner.flow > inner.capacity) {
          throw Error(ErrorCode::capacity_violation,
                      "sensor " + std::to_string(b) + " overdrawn");
        }
      }
    }
  }
  return net;
}

bool ResidualRoute::has_backward_internal(const FlowNetwork& net) const {
  return std::any_of(steps.begin(), steps.end(), [&](const ResidualStep& s) {
    return !s.forward && net.arcs[s.arc].internal;
  });
}

int ResidualRoute::backward_count() const {
  return static_cast<int>(std::count_if(steps.begin(), steps.end(),
                                        [](const ResidualStep& s) { return !s.forward; }));
}

namespace {

class RouteSearch {
 public:
  RouteSearch(const FlowNetwork& net, int m_cs) : net_(net), m_cs_(m_cs) {
    moves_.resize(net.vertex_count());
    for (std::size_t k = 0; k < net.arcs.size(); ++k) {
      const auto& a = net.arcs[k];
      if (a.capacity - a.flow >= 1) moves_[a.tail].push_back({k, true});
      if (a.flow >= 1) moves_[a.head].push_back({k, false});
    }
    on_path_.assign(net.vertex_count(), 0);
  }

  std::optional<ResidualRoute> run() {
    on_path_[0] = 1;
    if (!dfs(0, 0, 0)) return std::nullopt;
    ResidualRoute r;
    r.steps = path_;
    r.increment = net_.sentinel;
    for (const auto& s : path_) {
      const auto& a = net_.arcs[s.arc];
      r.increment = std::min(r.increment, s.forward ? a.capacity - a.flow : a.flow);
      if (s.forward && a.internal) ++r.forward_internal;
    }
    return r;
  }

 private:
  bool dfs(int v, int forward_internal, int backward) {
    if (v == net_.vertex_count() - 1) {
      return backward >= 1 && forward_internal >= m_cs_;
    }
    for (const auto& s : moves_[v]) {
      const auto& a = net_.arcs[s.arc];
      const int next = s.forward ? a.head : a.tail;
      if (on_path_[next]) continue;
      on_path_[next] = 1;
      path_.push_back(s);
      if (dfs(next, forward_internal + (s.forward && a.internal ? 1 : 0),
              backward + (s.forward ? 0 : 1))) {
        return true;
      }
      path_.pop_back();
      on_path_[next] = 0;
    }
    return false;
  }

  const FlowNetwork& net_;
  int m_cs_;
  std::vector<std::vector<ResidualStep>> moves_;
  std::vector<char> on_path_;
  std::vector<ResidualStep> path_;
};

}  // namespace

std::optional<ResidualRoute> find_backward_augmenting_route(
    const FlowNetwork& net, int m_cs, int max_sensors) {
  if (net.n_sensors > max_sensors) {
    throw Error(ErrorCode::too_large,
                std::to_string(net.n_sensors) + " sensors exceeds the guard of " +
                    std::to_string(max_sensors));
  }
  if (m_cs < 1) throw Error(ErrorCode::invalid_argument, "m_cs must be >= 1");
  return RouteSearch(net, m_cs).run();
}

Certificate certify_schedule(const Topology& t, std::span<const Energy> energies,
                             int m_cs, const Schedule& s, int max_sensors) {
  if (t.n_sensors() > max_sensors) {
    throw Error(ErrorCode::too_large,
                std::to_string(t.n_sensors()) + " sensors exceeds the guard of " +
                    std::to_string(max_sensors));
  }
  if (auto bad = schedule_violation(t, energies, m_cs, s)) {
    throw Error(ErrorCode::invalid_input, *bad);
  }
  const FlowNetwork net = load_schedule_flows(split_vertices(t, energies), s);
  Certificate cert;
  cert.route = find_backward_augmenting_route(net, m_cs, max_sensors);
  if (!cert.route) {
    cert.kind = CertificateKind::optimal;
    return cert;
  }
  cert.kind = CertificateKind::unknown;
  const auto& steps = cert.route->steps;
  if (cert.route->backward_count() != 1 || cert.route->has_backward_internal(net)) {
    return cert;
  }

  // Route b = <b1, in(j) <- out(i), b3>; b1 and b3 list the sensors whose
  // internal arcs are crossed before and after the backward link.
  std::vector<NodeIndex> b1, b3;
  NodeIndex i = 0, j = 0;
  bool after = false;
  for (const auto& st : steps) {
    const auto& a = net.arcs[st.arc];
    if (!st.forward) {
      i = a.tail_node;
      j = a.head_node;
      after = true;
    } else if (a.internal) {
      (after ? b3 : b1).push_back(a.tail_node);
    }
  }
  if (i < 1 || j > t.n_sensors()) return cert;

  for (std::size_t k = 0; k < s.slots.size(); ++k) {
    const auto& nodes = s.slots[k].nodes;
    const auto pos = std::find(nodes.begin(), nodes.end(), i);
    if (pos == nodes.end() || pos + 1 == nodes.end() || *(pos + 1) != j) continue;
    ActivationProfile first{{nodes.begin(), pos + 1}};
    first.nodes.insert(first.nodes.end(), b3.begin(), b3.end());
    ActivationProfile second{b1};
    second.nodes.insert(second.nodes.end(), pos + 1, nodes.end());

    Schedule spliced = s;
    spliced.slots[k] = std::move(first);
    spliced.slots.push_back(std::move(second));
    if (!schedule_violation(t, energies, m_cs, spliced)) {
      cert.kind = CertificateKind::improvable;
      cert.improved = std::move(spliced);
      return cert;
    }
  }
  return cert;
}

}  // namespace wsn
