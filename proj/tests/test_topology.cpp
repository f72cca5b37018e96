#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "wsnlife/errors.hpp"
#include "wsnlife/topology.hpp"

using namespace wsn;

namespace {

Topology chain6() { return oracle::chain6().topology(); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no wsn::Error thrown";
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST(Topology, MidpointReachesBothSinks) {
  const auto t = Topology::build({0, 0.5, 1}, {0.6, 0.6, 0.6});
  EXPECT_EQ(t.n_sensors(), 1);
  EXPECT_EQ(t.neighbors(1), (std::vector<NodeIndex>{0, 2}));
  EXPECT_TRUE(t.uniform_ranges());
}

TEST(Topology, ShortRangeHasNoEdges) {
  const auto t = Topology::build({0, 0.5, 1}, {0.4, 0.4, 0.4});
  for (NodeIndex i = 0; i < 3; ++i) EXPECT_TRUE(t.neighbors(i).empty());
}

TEST(Topology, ChainHasConsecutiveEdgesOnly) {
  const auto t = chain6();
  for (NodeIndex i = 0; i < 6; ++i) {
    for (NodeIndex j = 0; j < 6; ++j) {
      EXPECT_EQ(t.has_arc(i, j), std::abs(i - j) == 1) << i << "," << j;
    }
  }
  EXPECT_EQ(t.neighbors(2), (std::vector<NodeIndex>{1, 3}));
  EXPECT_EQ(t.neighbors(0), (std::vector<NodeIndex>{1}));
  const auto d = t.downstream(2);
  EXPECT_EQ(std::vector<NodeIndex>(d.begin(), d.end()), (std::vector<NodeIndex>{3}));
}

TEST(Topology, DistanceEqualToRangeIsAnEdge) {
  const auto t = Topology::build({0, 0.5, 1}, {0.5, 0.5, 0.5});
  EXPECT_TRUE(t.has_arc(0, 1));
  EXPECT_TRUE(t.has_arc(1, 2));
}

TEST(Topology, RejectsBadInput) {
  EXPECT_EQ(code_of([] { Topology::build({0, 0.5, 1}, {0.5, 0.5}); }), ErrorCode::length_mismatch);
  EXPECT_EQ(code_of([] { Topology::build({0, 1}, {0.5, 0.5}); }), ErrorCode::length_mismatch);
  EXPECT_EQ(code_of([] { Topology::build({0, 0.7, 0.3, 1}, {1, 1, 1, 1}); }),
            ErrorCode::unsorted_positions);
  EXPECT_EQ(code_of([] { Topology::build({0, 0.5, 1}, {0.5, 0, 0.5}); }),
            ErrorCode::non_positive_range);
  EXPECT_EQ(code_of([] { Topology::build({0, 0.5, 1}, {0.5, -1, 0.5}); }),
            ErrorCode::non_positive_range);
  EXPECT_EQ(code_of([] { Topology::build({0.1, 0.5, 1}, {1, 1, 1}); }), ErrorCode::invalid_argument);
  const auto t = chain6();
  EXPECT_EQ(code_of([&] { t.neighbors(6); }), ErrorCode::index_out_of_range);
  EXPECT_EQ(code_of([&] { t.neighbors(-1); }), ErrorCode::index_out_of_range);
}

TEST(Topology, UnequalRangesAreDirected) {
  const auto t = Topology::build({0, 0.3, 1}, {0.2, 0.8, 0.1});
  EXPECT_FALSE(t.has_arc(0, 1));
  EXPECT_TRUE(t.has_arc(1, 0));
  EXPECT_TRUE(t.has_arc(1, 2));
  EXPECT_FALSE(t.has_arc(2, 1));
  EXPECT_FALSE(t.uniform_ranges());
}

TEST(Connectivity, SpecExamples) {
  const auto t = chain6();
  EXPECT_TRUE(is_connected_induced(t, std::vector<NodeIndex>{1, 2, 3, 4}));
  EXPECT_FALSE(is_connected_induced(t, std::vector<NodeIndex>{1, 3, 4}));
  EXPECT_FALSE(is_connected_induced(t, std::vector<NodeIndex>{}));
  const auto wide = Topology::build({0, 0.5, 1}, {1, 1, 1});
  EXPECT_TRUE(is_connected_induced(wide, std::vector<NodeIndex>{}));
}

TEST(Connectivity, RejectsNonSensorIndex) {
  const auto t = chain6();
  EXPECT_EQ(code_of([&] { is_connected_induced(t, std::vector<NodeIndex>{0}); }),
            ErrorCode::index_out_of_range);
}

TEST(MinConnectedCount, SpecExamples) {
  const auto t = chain6();
  EXPECT_EQ(min_connected_count(t, std::vector<NodeIndex>{1, 2, 3, 4}), 4);
  EXPECT_EQ(min_connected_count(oracle::chain3().topology(), std::vector<NodeIndex>{1}), 1);
  EXPECT_EQ(min_connected_count(t, std::vector<NodeIndex>{1, 2, 4}), std::nullopt);
}

TEST(MinConnectedCount, CrossingIsTwo) {
  const auto t = oracle::crossing().topology();
  EXPECT_EQ(min_connected_count(t, std::vector<NodeIndex>{1, 2, 3, 4}), 2);
  EXPECT_EQ(min_connected_count(t, std::vector<NodeIndex>{1, 4}), std::nullopt);
}

TEST(ConnectivityProperty, AgreesWithUnionFind) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 10;
    const auto inst = oracle::random_instance(rng, n, 0.1 + 0.05 * (trial % 7), 1, 1, 1);
    const auto t = inst.topology();
    for (unsigned mask = 0; mask < (1u << n); mask += 1 + trial % 3) {
      std::vector<NodeIndex> active;
      for (int i = 0; i < n; ++i) {
        if (mask >> i & 1u) active.push_back(i + 1);
      }
      ASSERT_EQ(is_connected_induced(t, active), oracle::connected(inst, active))
          << "trial " << trial << " mask " << mask;
    }
  }
}

TEST(ConnectivityProperty, SymmetricUnderEqualRanges) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = oracle::random_instance(rng, 12, 0.2, 1, 1, 1).topology();
    for (NodeIndex i = 0; i < t.node_count(); ++i) {
      for (NodeIndex j : t.neighbors(i)) {
        const auto back = t.neighbors(j);
        EXPECT_NE(std::find(back.begin(), back.end(), i), back.end());
      }
    }
  }
}

TEST(ConnectivityProperty, RemovingCandidatesNeverShortensRoutes) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 10;
    const auto t = oracle::random_instance(rng, n, 0.3, 1, 1, 1).topology();
    std::vector<NodeIndex> all;
    for (int i = 1; i <= n; ++i) all.push_back(i);
    std::vector<NodeIndex> sub;
    for (int i = 1; i <= n; ++i) {
      if (rng() % 3 != 0) sub.push_back(i);
    }
    const auto full = min_connected_count(t, all);
    const auto part = min_connected_count(t, sub);
    if (part) {
      ASSERT_TRUE(full);
      EXPECT_GE(*part, *full);
    }
  }
}

TEST(ConnectivityProperty, MinCountMatchesSmallestRoute) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 8;
    const auto inst = oracle::random_instance(rng, n, 0.25, 1, 1, 1);
    const auto routes = oracle::all_routes(inst, 1);
    std::optional<int> smallest;
    for (const auto& r : routes) {
      if (!smallest || static_cast<int>(r.size()) < *smallest) smallest = static_cast<int>(r.size());
    }
    std::vector<NodeIndex> all;
    for (int i = 1; i <= n; ++i) all.push_back(i);
    EXPECT_EQ(min_connected_count(inst.topology(), all), smallest);
  }
}

TEST(Route, MonotoneRouteCheck) {
  const auto t = oracle::crossing().topology();
  EXPECT_TRUE(is_monotone_route(t, std::vector<NodeIndex>{3, 1}));
  EXPECT_FALSE(is_monotone_route(t, std::vector<NodeIndex>{1, 4}));
  EXPECT_FALSE(is_monotone_route(t, std::vector<NodeIndex>{1, 1, 3}));
  EXPECT_FALSE(is_monotone_route(t, std::vector<NodeIndex>{0, 3}));
}
