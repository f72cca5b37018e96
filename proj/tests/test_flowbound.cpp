#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "wsnlife/balancer.hpp"
#include "wsnlife/errors.hpp"
#include "wsnlife/exact.hpp"
#include "wsnlife/flowbound.hpp"

using namespace wsn;
using oracle::H;
using oracle::I;
using oracle::J;
using oracle::K;

namespace {

int finite_arcs(const FlowNetwork& net) {
  return static_cast<int>(std::count_if(net.arcs.begin(), net.arcs.end(),
                                        [](const FlowArc& a) { return a.internal; }));
}

Schedule sched(std::vector<std::vector<NodeIndex>> slots) {
  Schedule s;
  for (auto& n : slots) s.slots.push_back({std::move(n)});
  return s;
}

}  // namespace

TEST(Split, ThreeNodeChain) {
  const auto inst = oracle::chain3(5);
  const auto net = split_vertices(inst.topology(), inst.energies);
  ASSERT_EQ(net.arcs.size(), 3u);
  EXPECT_EQ(finite_arcs(net), 1);
  const auto k = net.internal_arc(1);
  ASSERT_TRUE(k);
  EXPECT_EQ(net.arcs[*k].capacity, 5);
  EXPECT_TRUE(net.link_arc(0, 1));
  EXPECT_TRUE(net.link_arc(1, 2));
  EXPECT_EQ(net.arcs[*net.link_arc(0, 1)].capacity, net.sentinel);
  EXPECT_EQ(net.sentinel, 6);
}

TEST(Split, SixNodeChain) {
  const auto inst = oracle::chain6({7, 3, 9, 4});
  const auto net = split_vertices(inst.topology(), inst.energies);
  // Five topology edges plus four internal arcs.
  EXPECT_EQ(net.arcs.size(), 9u);
  EXPECT_EQ(finite_arcs(net), 4);
  for (NodeIndex i = 1; i <= 4; ++i) {
    EXPECT_EQ(net.arcs[*net.internal_arc(i)].capacity, inst.energies[i - 1]);
  }
  for (const auto& a : net.arcs) EXPECT_EQ(a.flow, 0);
}

TEST(Split, CrossingHasNoHToK) {
  const auto inst = oracle::crossing();
  const auto net = split_vertices(inst.topology(), inst.energies);
  EXPECT_EQ(finite_arcs(net), 4);
  EXPECT_FALSE(net.link_arc(H, K));
  EXPECT_TRUE(net.link_arc(H, J));
  EXPECT_TRUE(net.link_arc(I, K));
  EXPECT_FALSE(net.link_arc(0, J));
}

TEST(Split, RejectsBadEnergies) {
  const auto t = oracle::crossing().topology();
  EXPECT_THROW(split_vertices(t, std::vector<Energy>{1, 1}), Error);
  EXPECT_THROW(split_vertices(t, std::vector<Energy>{1, 1, 0, 1}), Error);
}

TEST(LpFeasible, SpecExamples) {
  const auto c3 = oracle::chain3(5);
  const auto n3 = split_vertices(c3.topology(), c3.energies);
  EXPECT_TRUE(lp_feasible(n3, 1, 5));
  EXPECT_FALSE(lp_feasible(n3, 1, 6));
  const auto f = oracle::crossing();
  const auto nf = split_vertices(f.topology(), f.energies);
  EXPECT_TRUE(lp_feasible(nf, 2, 2));
  EXPECT_FALSE(lp_feasible(nf, 2, 3));
  EXPECT_THROW(lp_feasible(nf, 2, 0), Error);
}

TEST(LpFeasible, AgreesWithSlotIndexedLp) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + trial % 5;
    const int m_cs = 1 + trial % 3;
    const auto inst = oracle::random_instance(rng, n, 0.3 + 0.02 * (trial % 5), m_cs, 1, 4);
    const auto net = split_vertices(inst.topology(), inst.energies);
    for (Energy T = 1; T <= 6; ++T) {
      EXPECT_EQ(lp_feasible(net, m_cs, T), oracle::t_indexed_lp_feasible(inst, T))
          << "trial " << trial << " T " << T;
    }
  }
}

TEST(UpperBound, SpecExamples) {
  const auto c3 = oracle::chain3(5);
  EXPECT_EQ(lifetime_upper_bound(c3.topology(), c3.energies, 1), 5);
  const auto f = oracle::crossing();
  EXPECT_EQ(lifetime_upper_bound(f.topology(), f.energies, 2), 2);
  const auto c6 = oracle::chain6({7, 3, 9, 4});
  EXPECT_EQ(lifetime_upper_bound(c6.topology(), c6.energies, 2), 3);
}

TEST(UpperBound, InfeasibleGivesZero) {
  const Instance gap{{0, 0.5, 1}, {0.4, 0.4, 0.4}, {9}, 1};
  EXPECT_EQ(lifetime_upper_bound(gap.topology(), gap.energies, 1), 0);
  const auto c6 = oracle::chain6({7, 3, 9, 4});
  EXPECT_EQ(lifetime_upper_bound(c6.topology(), c6.energies, 5), 0);
}

TEST(UpperBound, HintDoesNotChangeTheAnswer) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = oracle::random_feasible_instance(rng, 8, 0.3, 2, 2, 9);
    const auto t = inst.topology();
    const Energy plain = lifetime_upper_bound(t, inst.energies, 2, 0);
    for (Energy hint : {Energy{1}, plain, plain + 3, Energy{1000}}) {
      EXPECT_EQ(lifetime_upper_bound(t, inst.energies, 2, hint), plain);
    }
  }
}

TEST(UpperBound, MatchesLinearScan) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    const int m_cs = 1 + trial % 3;
    const auto inst = oracle::random_feasible_instance(rng, 6 + trial % 4, 0.35, m_cs, 1, 8);
    const auto t = inst.topology();
    const auto net = split_vertices(t, inst.energies);
    Energy scan = 0;
    while (lp_feasible(net, m_cs, scan + 1)) ++scan;
    EXPECT_EQ(lifetime_upper_bound(t, inst.energies, m_cs), scan);
  }
}

TEST(Sandwich, SmallRandomInstances) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 30; ++trial) {
    const int m_cs = 2 + trial % 3;
    const auto inst = oracle::random_feasible_instance(rng, 8, 0.3, m_cs, 3, 9);
    const auto t = inst.topology();
    const auto g = static_cast<Energy>(run_energy_balancing(t, inst.energies, m_cs).lifetime);
    const Energy opt = solve_mdk(enumerate_profiles(t, m_cs), inst.energies).lifetime;
    const Energy ub = lifetime_upper_bound(t, inst.energies, m_cs, g);
    EXPECT_LE(g, opt);
    EXPECT_LE(opt, ub);
  }
}

TEST(LoadFlows, EmptyScheduleHasZeroFlow) {
  const auto f = oracle::crossing();
  const auto net = load_schedule_flows(split_vertices(f.topology(), f.energies), {});
  for (const auto& a : net.arcs) EXPECT_EQ(a.flow, 0);
}

TEST(LoadFlows, CrossingSchedule) {
  const auto f = oracle::crossing();
  const auto net = load_schedule_flows(split_vertices(f.topology(), f.energies),
                                       sched({{H, J}, {I, K}}));
  for (NodeIndex v : {H, I, J, K}) EXPECT_EQ(net.arcs[*net.internal_arc(v)].flow, 1);
  EXPECT_EQ(net.arcs[*net.link_arc(H, J)].flow, 1);
  EXPECT_EQ(net.arcs[*net.link_arc(I, K)].flow, 1);
  EXPECT_EQ(net.arcs[*net.link_arc(I, J)].flow, 0);
  EXPECT_EQ(net.arcs[*net.link_arc(0, H)].flow, 1);
}

TEST(LoadFlows, RepeatedChain) {
  const auto c6 = oracle::chain6({3, 3, 3, 3});
  const auto net = load_schedule_flows(split_vertices(c6.topology(), c6.energies),
                                       sched({{1, 2, 3, 4}, {1, 2, 3, 4}, {1, 2, 3, 4}}));
  for (const auto& a : net.arcs) EXPECT_EQ(a.flow, 3);
}

TEST(LoadFlows, Errors) {
  const auto f = oracle::crossing();
  const auto net = split_vertices(f.topology(), f.energies);
  try {
    load_schedule_flows(net, sched({{H, J}, {H, J}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::capacity_violation);
  }
  EXPECT_THROW(load_schedule_flows(net, sched({{H, K}})), Error);
}

TEST(BackwardRoute, CrossingBadSchedule) {
  const auto f = oracle::crossing();
  const auto net = load_schedule_flows(split_vertices(f.topology(), f.energies), sched({{I, J}}));
  const auto r = find_backward_augmenting_route(net, 2);
  ASSERT_TRUE(r);
  EXPECT_FALSE(r->has_backward_internal(net));
  EXPECT_EQ(r->increment, 1);
  EXPECT_GE(r->forward_internal, 2);
  const auto ij = *net.link_arc(I, J);
  EXPECT_TRUE(std::any_of(r->steps.begin(), r->steps.end(),
                          [&](const ResidualStep& s) { return s.arc == ij && !s.forward; }));
}

TEST(BackwardRoute, CrossingOptimalScheduleHasNone) {
  const auto f = oracle::crossing();
  const auto net = load_schedule_flows(split_vertices(f.topology(), f.energies),
                                       sched({{H, J}, {I, K}}));
  EXPECT_FALSE(find_backward_augmenting_route(net, 2));
}

TEST(BackwardRoute, ZeroFlowHasNone) {
  const auto f = oracle::crossing(3);
  EXPECT_FALSE(find_backward_augmenting_route(split_vertices(f.topology(), f.energies), 2));
}

TEST(BackwardRoute, Guard) {
  std::mt19937_64 rng(2);
  const auto inst = oracle::random_instance(rng, 15, 0.3, 1, 1, 3);
  const auto net = split_vertices(inst.topology(), inst.energies);
  try {
    find_backward_augmenting_route(net, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::too_large);
  }
}

TEST(Certify, CrossingBadScheduleIsImprovable) {
  const auto f = oracle::crossing();
  const auto c = certify_schedule(f.topology(), f.energies, 2, sched({{I, J}}));
  ASSERT_EQ(c.kind, CertificateKind::improvable);
  ASSERT_TRUE(c.improved);
  EXPECT_EQ(c.improved->lifetime(), 2u);
  EXPECT_EQ(schedule_violation(f.topology(), f.energies, 2, *c.improved), std::nullopt);
}

TEST(Certify, CrossingGoodScheduleIsOptimal) {
  const auto f = oracle::crossing();
  EXPECT_EQ(certify_schedule(f.topology(), f.energies, 2, sched({{H, J}, {I, K}})).kind,
            CertificateKind::optimal);
}

TEST(Certify, EmptyScheduleOnInfeasibleInstance) {
  const auto c6 = oracle::chain6({2, 2, 2, 2});
  EXPECT_EQ(certify_schedule(c6.topology(), c6.energies, 5, {}).kind, CertificateKind::optimal);
}

TEST(Certify, RejectsInvalidSchedule) {
  const auto f = oracle::crossing();
  try {
    certify_schedule(f.topology(), f.energies, 2, sched({{H, K}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_input);
  }
}

TEST(CertifyProperty, SplicesAreValidAndOneLonger) {
  std::mt19937_64 rng(64);
  int improvable = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int m_cs = 2 + trial % 3;
    const auto inst = oracle::random_feasible_instance(rng, 6 + trial % 5, 0.3, m_cs, 1, 4);
    const auto t = inst.topology();
    const auto g = run_energy_balancing(t, inst.energies, m_cs);
    const auto c = certify_schedule(t, inst.energies, m_cs, g.schedule);
    if (c.kind == CertificateKind::improvable) {
      ++improvable;
      ASSERT_TRUE(c.improved);
      EXPECT_EQ(c.improved->lifetime(), g.lifetime + 1);
      EXPECT_EQ(schedule_violation(t, inst.energies, m_cs, *c.improved), std::nullopt);
    }
    if (c.kind == CertificateKind::optimal) {
      const Energy opt = solve_mdk(enumerate_profiles(t, m_cs), inst.energies).lifetime;
      EXPECT_EQ(static_cast<Energy>(g.lifetime), opt) << trial;
    }
  }
  RecordProperty("improvable", improvable);
}
