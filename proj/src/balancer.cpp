#include "wsnlife/balancer.hpp"

#include <cmath>
#include <string>

#include "wsnlife/errors.hpp"

namespace wsn {
namespace {

// Double sums of at most a few hundred terms in [0,1] are off by far less
// than this; anything closer is settled with exact rationals.
constexpr double kExactFallbackGap = 1e-9;

class ProfileDp {
 public:
  ProfileDp(const Topology& t, const EnergyState& energy, int m,
            const TieBreak& tie)
      : t_(t), energy_(energy), m_(m), tie_(tie),
        width_(m + 1),
        approx_(static_cast<std::size_t>(t.node_count()) * width_, 0.0),
        next_(approx_.size(), kUnreachable),
        exact_(approx_.size()) {
    p_.assign(t.node_count(), 0.0);
    candidate_.assign(t.node_count(), 0);
    for (NodeIndex v = 1; v <= t.n_sensors(); ++v) {
      candidate_[v] = energy.is_candidate(v);
      p_[v] = energy.normalized_approx(v);
    }
  }

  std::optional<DpChoice> solve() {
    const NodeIndex sink = t_.right_sink();
    for (NodeIndex v = sink - 1; v >= 0; --v) {
      if (v != t_.left_sink() && !candidate_[v]) continue;
      const auto down = t_.downstream(v);
      const bool reaches_sink = !down.empty() && down.back() == sink;
      next_[at(v, 0)] = reaches_sink ? kSinkReached : kUnreachable;

      for (int k = 1; k <= m_; ++k) {
        NodeIndex best = kUnreachable;
        for (NodeIndex u : down) {
          if (u == sink || !candidate_[u] || next_[at(u, k - 1)] == kUnreachable)
            continue;
          if (best == kUnreachable || prefer(u, best, k - 1)) best = u;
        }
        next_[at(v, k)] = best;
        if (best != kUnreachable) {
          approx_[at(v, k)] = p_[best] + approx_[at(best, k - 1)];
        }
      }
    }

    const NodeIndex root = t_.left_sink();
    if (next_[at(root, m_)] == kUnreachable) return std::nullopt;

    DpChoice choice;
    choice.value = exact(root, m_);
    NodeIndex v = root;
    for (int k = m_; k > 0; --k) {
      v = next_[at(v, k)];
      choice.profile.nodes.push_back(v);
    }
    return choice;
  }

 private:
  static constexpr NodeIndex kUnreachable = -1;
  static constexpr NodeIndex kSinkReached = -2;

  std::size_t at(NodeIndex v, int k) const {
    return static_cast<std::size_t>(v) * width_ + static_cast<std::size_t>(k);
  }

  // Is child a strictly better than child b for a slot with k remaining?
  bool prefer(NodeIndex a, NodeIndex b, int k) {
    const double va = p_[a] + approx_[at(a, k)];
    const double vb = p_[b] + approx_[at(b, k)];
    if (std::abs(va - vb) > kExactFallbackGap) return va > vb;
    const Rational ea = energy_.normalized(a) + exact(a, k);
    const Rational eb = energy_.normalized(b) + exact(b, k);
    if (ea != eb) return ea > eb;
    return tie_.of(a) < tie_.of(b);
  }

  // Exact value of g(v,k), materialized on demand along the argmax chain.
  const Rational& exact(NodeIndex v, int k) {
    auto& slot = exact_[at(v, k)];
    if (!slot) {
      if (k == 0) {
        slot = Rational(0);
      } else {
        const NodeIndex u = next_[at(v, k)];
        slot = energy_.normalized(u) + exact(u, k - 1);
      }
    }
    return *slot;
  }

  const Topology& t_;
  const EnergyState& energy_;
  int m_;
  const TieBreak& tie_;
  std::size_t width_;
  std::vector<double> approx_;
  std::vector<NodeIndex> next_;
  std::vector<std::optional<Rational>> exact_;
  std::vector<double> p_;
  std::vector<char> candidate_;
};

}  // namespace

std::optional<DpChoice> dp_best_profile(const Topology& t,
                                        const EnergyState& energy, int m,
                                        const TieBreak& tie) {
  if (m < 1) {
    throw Error(ErrorCode::invalid_argument, "profile size must be >= 1");
  }
  if (energy.n_sensors() != t.n_sensors()) {
    throw Error(ErrorCode::length_mismatch, "energy state vs topology");
  }
  if (m > energy.candidate_count()) return std::nullopt;
  return ProfileDp(t, energy, m, tie).solve();
}

std::optional<ActivationProfile> select_activation(const Topology& t,
                                                   const EnergyState& energy,
                                                   int m_cs,
                                                   const TieBreak& tie) {
  if (m_cs < 1) {
    throw Error(ErrorCode::invalid_argument, "m_cs must be >= 1");
  }
  std::vector<char> mask(t.node_count(), 0);
  for (NodeIndex v = 1; v <= t.n_sensors(); ++v) mask[v] = energy.is_candidate(v);
  const auto m_c = min_connected_count(t, std::span<const char>(mask));
  if (!m_c) return std::nullopt;

  const int m = std::max(*m_c, m_cs);
  if (energy.candidate_count() < m) return std::nullopt;
  auto choice = dp_best_profile(t, energy, m, tie);
  if (!choice) return std::nullopt;
  return std::move(choice->profile);
}

BalancingResult run_energy_balancing(const Topology& t,
                                     std::span<const Energy> initial, int m_cs,
                                     const TieBreak& tie) {
  if (static_cast<int>(initial.size()) != t.n_sensors()) {
    throw Error(ErrorCode::length_mismatch,
                "expected " + std::to_string(t.n_sensors()) + " energies");
  }
  EnergyState energy({initial.begin(), initial.end()});
  BalancingResult result;
  while (auto profile = select_activation(t, energy, m_cs, tie)) {
    energy.consume(profile->nodes);
    result.schedule.slots.push_back(std::move(*profile));
  }
  result.lifetime = result.schedule.lifetime();
  return result;
}

}  // namespace wsn
