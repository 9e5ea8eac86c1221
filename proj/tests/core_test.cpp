#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

using namespace wsnlife;
using wsnlife::testing::make_state;

TEST(Distance, Examples) {
  EXPECT_EQ(distance({0, 0}, {0, 0}), 0.0);
  EXPECT_EQ(distance({0, 0}, {3, 4}), 5.0);
  EXPECT_EQ(distance({1, 1}, {4, 5}), 5.0);
}

TEST(Distance, SymmetricAndTriangleInequality) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1000.0, 1000.0);
  for (int i = 0; i < 10000; ++i) {
    const Point a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
    EXPECT_EQ(distance(a, b), distance(b, a));
    EXPECT_LE(distance(a, c), distance(a, b) + distance(b, c) + 1e-9);
    EXPECT_GT(distance(a, b), 0.0);
  }
}

TEST(Neighbors, SingleNode) {
  const auto s = make_state({{0, 0}});
  EXPECT_TRUE(neighbors(s, 0, 100).empty());
}

TEST(Neighbors, TwoNodesWithinRadius) {
  const auto s = make_state({{0, 0}, {50, 0}});
  EXPECT_EQ(neighbors(s, 0, 100), std::vector<NodeId>{1});
  EXPECT_EQ(neighbors(s, 1, 100), std::vector<NodeId>{0});
}

TEST(Neighbors, CollinearThree) {
  const auto s = make_state({{0, 0}, {90, 0}, {180, 0}});
  EXPECT_EQ(neighbors(s, 1, 100), (std::vector<NodeId>{0, 2}));
  EXPECT_EQ(neighbors(s, 0, 100), std::vector<NodeId>{1});
  EXPECT_EQ(neighbors(s, 2, 100), std::vector<NodeId>{1});
}

TEST(Neighbors, ClosedDiskAndDeadNodesExcluded) {
  auto s = make_state({{0, 0}, {100, 0}, {0, 30}});
  EXPECT_EQ(neighbors(s, 0, 100), (std::vector<NodeId>{1, 2}));
  wsnlife::testing::kill(s, 2);
  EXPECT_EQ(neighbors(s, 0, 100), std::vector<NodeId>{1});
}

TEST(Neighbors, UnknownIdThrows) {
  const auto s = make_state({{0, 0}});
  EXPECT_THROW(neighbors(s, 7, 100), std::out_of_range);
}

TEST(Neighbors, SymmetricOnRandomNetworks) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = make_state(wsnlife::testing::random_points(rng, 40, 400, 300));
    for (NodeId a = 0; a < s.size(); ++a)
      for (NodeId b : neighbors(s, a, 80)) {
        const auto back = neighbors(s, b, 80);
        EXPECT_TRUE(std::find(back.begin(), back.end(), a) != back.end());
      }
  }
}

TEST(NetworkState, ChargeKeepsLedgerAndClampsAtZero) {
  auto s = make_state({{0, 0}, {10, 0}}, 1e-3);
  EXPECT_TRUE(s.charge(1, 4e-4));
  EXPECT_TRUE(s.alive(1));
  EXPECT_FALSE(s.charge(1, 1e-3));
  EXPECT_FALSE(s.alive(1));
  EXPECT_EQ(s.node(1).energy, 0.0);
  EXPECT_DOUBLE_EQ(s.energy_ledger, 1e-3);
  EXPECT_DOUBLE_EQ(s.energy_spent(), s.energy_ledger);
  EXPECT_FALSE(s.charge(1, 1e-6));
  EXPECT_DOUBLE_EQ(s.energy_ledger, 1e-3);
}

TEST(NetworkState, SinkNeverPays) {
  auto s = make_state({{0, 0}});
  EXPECT_TRUE(s.charge(kSinkId, 1e9));
  EXPECT_TRUE(s.alive(kSinkId));
  EXPECT_EQ(s.energy_ledger, 0.0);
}

TEST(NetworkState, ExactExhaustionCountsAsPaid) {
  auto s = make_state({{0, 0}, {1, 0}}, 7.5e-4);
  for (int i = 0; i < 9; ++i) ASSERT_TRUE(s.charge(1, 7.5e-5));
  EXPECT_TRUE(s.alive(1));
  EXPECT_TRUE(s.charge(1, 7.5e-5));
  EXPECT_FALSE(s.alive(1));
}

TEST(Topology, TreeValidation) {
  Topology t;
  t.active = {0, 1};
  t.parent = {{1, 0}, {2, 1}};
  EXPECT_TRUE(is_valid_tree(t));

  Topology cyc = t;
  cyc.active = {0, 1, 2};
  cyc.parent = {{1, 2}, {2, 1}};
  std::string why;
  EXPECT_FALSE(is_valid_tree(cyc, &why));
  EXPECT_FALSE(why.empty());

  Topology sleeping_parent = t;
  sleeping_parent.parent[3] = 2;
  EXPECT_FALSE(is_valid_tree(sleeping_parent));
}

TEST(Params, Validation) {
  EXPECT_NO_THROW(RadioParams{}.validate());
  EXPECT_NO_THROW(EnergyParams{}.validate());
  EXPECT_NO_THROW(SensingParams{}.validate(20.0));

  RadioParams r;
  r.comm_radius = 0;
  try {
    r.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "radio.comm_radius");
  }

  SensingParams sp;
  sp.uncertainty_radius = 20.0;
  EXPECT_THROW(sp.validate(20.0), ConfigError);
  sp = SensingParams{};
  sp.p_min = 1.0;
  EXPECT_THROW(sp.validate(20.0), ConfigError);

  EnergyParams e;
  e.data_packet_bits = 0;
  EXPECT_THROW(e.validate(), ConfigError);

  DeploymentArea a{0, 10};
  EXPECT_THROW(a.validate(), ConfigError);
}
