#include "wsnlife/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "wsnlife/errors.hpp"
#include "wsnlife/packing_lp.hpp"

namespace wsn {
namespace {

using Clock = std::chrono::steady_clock;

// Bit i-1 is sensor i.
RowMask mask_of(const ActivationProfile& p) {
  RowMask m = 0;
  for (NodeIndex v : p.nodes) m |= RowMask{1} << (v - 1);
  return m;
}

ActivationProfile profile_of(RowMask m) {
  ActivationProfile p;
  while (m) {
    p.nodes.push_back(std::countr_zero(m) + 1);
    m &= m - 1;
  }
  return p;
}

bool catalog_order(const ActivationProfile& a, const ActivationProfile& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.nodes < b.nodes;
}

class BranchAndBound {
 public:
  BranchAndBound(std::vector<RowMask> masks, std::vector<Energy> energy,
                 Clock::time_point deadline)
      : masks_(std::move(masks)), res_(std::move(energy)), deadline_(deadline),
        n_(static_cast<int>(res_.size())) {}

  // Returns counts aligned with the mask order given to the constructor.
  std::vector<Energy> solve(const std::vector<Energy>& seed_counts) {
    const std::size_t L = masks_.size();
    best_counts_ = seed_counts;
    best_ = std::accumulate(seed_counts.begin(), seed_counts.end(), Energy{0});

    RowMask all = 0;
    int min_size = 64;
    for (RowMask m : masks_) {
      all |= m;
      min_size = std::min(min_size, std::popcount(m));
    }
    upper_ = std::min(volume_bound(all, min_size), lp_bound(0));
    if (best_ >= upper_) return best_counts_;

    dive();
    if (best_ >= upper_) return best_counts_;

    // Descending bottleneck budget first; the sort is stable so catalog order
    // settles ties.
    order_.resize(L);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::vector<Energy> slack(L);
    for (std::size_t l = 0; l < L; ++l) slack[l] = max_fit(masks_[l]);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return slack[a] > slack[b]; });

    suffix_union_.assign(L + 1, 0);
    suffix_min_.assign(L + 1, 64);
    for (std::size_t k = L; k-- > 0;) {
      const RowMask m = masks_[order_[k]];
      suffix_union_[k] = suffix_union_[k + 1] | m;
      suffix_min_[k] = std::min(suffix_min_[k + 1], std::popcount(m));
    }
    counts_.assign(L, 0);
    cur_ = 0;
    search(0);
    return best_counts_;
  }

 private:
  void tick() {
    if ((++nodes_ & 255) == 0 && Clock::now() > deadline_) {
      throw Error(ErrorCode::timeout, "branch and bound exceeded its budget");
    }
  }

  Energy max_fit(RowMask m) const {
    Energy fit = std::numeric_limits<Energy>::max();
    while (m) {
      fit = std::min(fit, res_[std::countr_zero(m)]);
      m &= m - 1;
    }
    return fit;
  }

  void apply(RowMask m, Energy z) {
    while (m) {
      res_[std::countr_zero(m)] -= z;
      m &= m - 1;
    }
  }

  // Every remaining slot takes at least min_size units out of the sensors
  // still covered by some profile.
  Energy volume_bound(RowMask cover, int min_size) const {
    if (min_size >= 64) return 0;
    Energy total = 0;
    while (cover) {
      total += res_[std::countr_zero(cover)];
      cover &= cover - 1;
    }
    return total / min_size;
  }

  // LP relaxation over the profiles at order positions >= from (all of them
  // before the order exists) that still fit.
  Energy lp_bound(std::size_t from) {
    std::vector<RowMask> cols;
    if (order_.empty()) {
      for (RowMask m : masks_) {
        if (max_fit(m) >= 1) cols.push_back(m);
      }
    } else {
      for (std::size_t k = from; k < order_.size(); ++k) {
        const RowMask m = masks_[order_[k]];
        if (max_fit(m) >= 1) cols.push_back(m);
      }
    }
    if (cols.empty()) return 0;
    std::vector<double> cap(n_);
    for (int i = 0; i < n_; ++i) cap[i] = static_cast<double>(res_[i]);
    const auto lp = solve_packing_lp(cols, cap, deadline_);
    if (!std::isfinite(lp.dual_bound)) return std::numeric_limits<Energy>::max();
    return static_cast<Energy>(std::floor(lp.dual_bound + 1e-7));
  }

  // LP rounding: keep the integer part of every LP column, fix one unit of the
  // largest fractional column when nothing rounds to one, and resolve.
  void dive() {
    const std::vector<Energy> saved = res_;
    const std::size_t L = masks_.size();
    std::vector<Energy> counts(L, 0);
    Energy total = 0;
    for (;;) {
      std::vector<std::size_t> idx;
      std::vector<RowMask> cols;
      for (std::size_t l = 0; l < L; ++l) {
        if (max_fit(masks_[l]) >= 1) {
          idx.push_back(l);
          cols.push_back(masks_[l]);
        }
      }
      if (cols.empty()) break;
      std::vector<double> cap(n_);
      for (int i = 0; i < n_; ++i) cap[i] = static_cast<double>(res_[i]);
      const auto lp = solve_packing_lp(cols, cap, deadline_);
      bool moved = false;
      std::size_t top = 0;
      for (std::size_t c = 0; c < cols.size(); ++c) {
        if (lp.z[c] > lp.z[top]) top = c;
        const Energy k = std::min(static_cast<Energy>(std::floor(lp.z[c] + 1e-9)),
                                  max_fit(cols[c]));
        if (k >= 1) {
          apply(cols[c], k);
          counts[idx[c]] += k;
          total += k;
          moved = true;
        }
      }
      if (!moved) {
        apply(cols[top], 1);
        counts[idx[top]] += 1;
        total += 1;
      }
    }
    res_ = saved;
    if (total > best_) {
      best_ = total;
      best_counts_ = std::move(counts);
    }
  }

  void search(std::size_t pos) {
    tick();
    if (cur_ > best_) {
      best_ = cur_;
      best_counts_ = counts_;
    }
    if (best_ >= upper_) return;
    const std::size_t L = order_.size();
    if (pos < L && cur_ + lp_bound(pos) <= best_) return;

    for (; pos < L; ++pos) {
      if (cur_ + volume_bound(suffix_union_[pos], suffix_min_[pos]) <= best_) return;
      const std::size_t l = order_[pos];
      const Energy fit = max_fit(masks_[l]);
      if (fit < 1) continue;
      for (Energy z = fit; z >= 1; --z) {
        apply(masks_[l], z);
        cur_ += z;
        counts_[l] = z;
        search(pos + 1);
        counts_[l] = 0;
        cur_ -= z;
        apply(masks_[l], -z);
        if (best_ >= upper_) return;
      }
    }
  }

  std::vector<RowMask> masks_;
  std::vector<Energy> res_;
  Clock::time_point deadline_;
  int n_;
  std::vector<std::size_t> order_;
  std::vector<RowMask> suffix_union_;
  std::vector<int> suffix_min_;
  std::vector<Energy> counts_;
  std::vector<Energy> best_counts_;
  Energy cur_ = 0;
  Energy best_ = 0;
  Energy upper_ = 0;
  std::uint64_t nodes_ = 0;
};

}  // namespace

ProfileCatalog make_catalog(int n_sensors, std::vector<ActivationProfile> profiles) {
  if (n_sensors < 0) {
    throw Error(ErrorCode::invalid_argument, "negative sensor count");
  }
  for (auto& p : profiles) {
    std::sort(p.nodes.begin(), p.nodes.end());
    if (p.nodes.empty()) {
      throw Error(ErrorCode::invalid_argument, "empty profile");
    }
    if (std::adjacent_find(p.nodes.begin(), p.nodes.end()) != p.nodes.end()) {
      throw Error(ErrorCode::invalid_argument, "profile repeats a sensor");
    }
    if (p.nodes.front() < 1 || p.nodes.back() > n_sensors) {
      throw Error(ErrorCode::index_out_of_range, "profile sensor out of range");
    }
  }
  std::sort(profiles.begin(), profiles.end(), catalog_order);
  if (std::adjacent_find(profiles.begin(), profiles.end()) != profiles.end()) {
    throw Error(ErrorCode::invalid_argument, "duplicate profile");
  }
  ProfileCatalog c;
  c.n_sensors = n_sensors;
  c.profiles = std::move(profiles);
  c.usage_index.resize(n_sensors);
  for (std::size_t l = 0; l < c.profiles.size(); ++l) {
    for (NodeIndex v : c.profiles[l].nodes) c.usage_index[v - 1].push_back(l);
  }
  return c;
}

ProfileCatalog enumerate_profiles(const Topology& t, int m_cs, int max_sensors) {
  if (m_cs < 1) throw Error(ErrorCode::invalid_argument, "m_cs must be >= 1");
  if (t.n_sensors() > max_sensors || t.n_sensors() > 64) {
    throw Error(ErrorCode::too_large,
                std::to_string(t.n_sensors()) + " sensors exceeds the guard of " +
                    std::to_string(max_sensors));
  }
  const NodeIndex sink = t.right_sink();
  std::vector<RowMask> found;
  // Explicit stack of (node, mask of sensors so far).
  std::vector<std::pair<NodeIndex, RowMask>> stack{{t.left_sink(), 0}};
  while (!stack.empty()) {
    const auto [v, m] = stack.back();
    stack.pop_back();
    for (NodeIndex u : t.downstream(v)) {
      if (u == sink) {
        if (std::popcount(m) >= m_cs) found.push_back(m);
      } else {
        stack.emplace_back(u, m | (RowMask{1} << (u - 1)));
      }
    }
  }
  std::vector<ActivationProfile> profiles;
  profiles.reserve(found.size());
  for (RowMask m : found) profiles.push_back(profile_of(m));
  return make_catalog(t.n_sensors(), std::move(profiles));
}

ProfileCatalog remove_dominated(const ProfileCatalog& catalog) {
  std::unordered_set<RowMask> present;
  std::vector<RowMask> masks;
  masks.reserve(catalog.profiles.size());
  for (const auto& p : catalog.profiles) {
    masks.push_back(mask_of(p));
    present.insert(masks.back());
  }
  std::vector<ActivationProfile> kept;
  for (std::size_t l = 0; l < masks.size(); ++l) {
    bool dominated = false;
    for (RowMask rest = masks[l]; rest && !dominated; rest &= rest - 1) {
      const RowMask bit = rest & (~rest + 1);
      dominated = present.count(masks[l] & ~bit) > 0;
    }
    if (!dominated) kept.push_back(catalog.profiles[l]);
  }
  return make_catalog(catalog.n_sensors, std::move(kept));
}

MdkSolution solve_mdk(const ProfileCatalog& catalog,
                      std::span<const Energy> energies,
                      const MdkOptions& options) {
  if (static_cast<int>(energies.size()) != catalog.n_sensors) {
    throw Error(ErrorCode::length_mismatch,
                "expected " + std::to_string(catalog.n_sensors) + " energies");
  }
  if (catalog.n_sensors > 64) {
    throw Error(ErrorCode::too_large, "at most 64 sensors");
  }
  for (Energy e : energies) {
    if (e < 0) throw Error(ErrorCode::invalid_argument, "negative energy");
  }
  const auto deadline = Clock::now() + options.time_budget;
  MdkSolution sol;
  sol.counts.assign(catalog.profiles.size(), 0);

  std::unordered_map<RowMask, std::size_t> index_of;
  for (std::size_t l = 0; l < catalog.profiles.size(); ++l) {
    index_of.emplace(mask_of(catalog.profiles[l]), l);
  }

  // Undominated profiles whose sensors all have budget left.
  std::vector<RowMask> masks;
  std::vector<std::size_t> back;
  for (const auto& p : remove_dominated(catalog).profiles) {
    const bool affordable = std::all_of(p.nodes.begin(), p.nodes.end(),
                                        [&](NodeIndex v) { return energies[v - 1] >= 1; });
    if (!affordable) continue;
    masks.push_back(mask_of(p));
    back.push_back(index_of.at(masks.back()));
  }
  if (masks.empty()) return sol;

  std::unordered_map<RowMask, std::size_t> reduced_of;
  for (std::size_t k = 0; k < masks.size(); ++k) reduced_of.emplace(masks[k], k);

  // Hint slots are mapped onto a kept profile they contain, then the budget
  // left over is filled greedily.
  std::vector<Energy> seed(masks.size(), 0);
  {
    std::vector<Energy> res(energies.begin(), energies.end());
    bool ok = true;
    for (const auto& slot : options.hint.slots) {
      RowMask m = 0;
      for (NodeIndex v : slot.nodes) {
        if (v < 1 || v > catalog.n_sensors) ok = false;
        else m |= RowMask{1} << (v - 1);
      }
      if (!ok) break;
      std::optional<std::size_t> hit;
      std::vector<RowMask> frontier{m};
      std::unordered_set<RowMask> seen{m};
      while (!frontier.empty() && !hit) {
        const RowMask cur = frontier.back();
        frontier.pop_back();
        if (auto it = reduced_of.find(cur); it != reduced_of.end()) {
          hit = it->second;
          break;
        }
        if (!index_of.count(cur) && cur != m) continue;
        for (RowMask rest = cur; rest; rest &= rest - 1) {
          const RowMask next = cur & ~(rest & (~rest + 1));
          if (seen.insert(next).second) frontier.push_back(next);
        }
      }
      if (!hit) continue;
      for (RowMask b = masks[*hit]; b; b &= b - 1) --res[std::countr_zero(b)];
      ++seed[*hit];
    }
    ok = ok && std::all_of(res.begin(), res.end(), [](Energy e) { return e >= 0; });
    if (!ok) {
      std::fill(seed.begin(), seed.end(), 0);
      res.assign(energies.begin(), energies.end());
    }
    for (std::size_t k = 0; k < masks.size(); ++k) {
      Energy fit = std::numeric_limits<Energy>::max();
      for (RowMask b = masks[k]; b; b &= b - 1) fit = std::min(fit, res[std::countr_zero(b)]);
      if (fit < 1) continue;
      for (RowMask b = masks[k]; b; b &= b - 1) res[std::countr_zero(b)] -= fit;
      seed[k] += fit;
    }
  }

  BranchAndBound bb(masks, {energies.begin(), energies.end()}, deadline);
  const auto counts = bb.solve(seed);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    sol.counts[back[k]] += counts[k];
    sol.lifetime += counts[k];
  }
  return sol;
}

Schedule schedule_from_mdk(const MdkSolution& sol, const ProfileCatalog& catalog,
                           std::span<const Energy> energies) {
  if (sol.counts.size() != catalog.profiles.size()) {
    throw Error(ErrorCode::length_mismatch, "one count per catalog profile");
  }
  if (static_cast<int>(energies.size()) != catalog.n_sensors) {
    throw Error(ErrorCode::length_mismatch, "one energy per sensor");
  }
  Schedule s;
  std::vector<Energy> used(catalog.n_sensors, 0);
  for (std::size_t l = 0; l < sol.counts.size(); ++l) {
    if (sol.counts[l] < 0) {
      throw Error(ErrorCode::infeasible_solution, "negative profile count");
    }
    for (NodeIndex v : catalog.profiles[l].nodes) used[v - 1] += sol.counts[l];
    for (Energy k = 0; k < sol.counts[l]; ++k) s.slots.push_back(catalog.profiles[l]);
  }
  for (int i = 0; i < catalog.n_sensors; ++i) {
    if (used[i] > energies[i]) {
      throw Error(ErrorCode::infeasible_solution,
                  "sensor " + std::to_string(i + 1) + " overdrawn");
    }
  }
  return s;
}

}  // namespace wsn
