#include <gtest/gtest.h>

#include <limits>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rasesim/rng.hpp"
#include "rasesim/routing.hpp"

using namespace rasesim;
using fixtures::error_of;

namespace {

NetworkSpec switches_only(std::vector<std::string> ids, std::vector<LinkSpec> links) {
  NetworkSpec spec;
  spec.hosts = {{ids.front(), 1, 1}};
  spec.switches.assign(ids.begin() + 1, ids.end());
  spec.links = std::move(links);
  spec.ingress_node = ids.front();
  spec.egress_host = ids.front();
  return spec;
}

double recomputed_cost(const SubstrateNetwork& net, const Path& p) {
  double c = 0.0;
  for (auto l : p.links) c += net.propagation_delay_ms(l);
  return c;
}

}  // namespace

TEST(Routing, SameEndpointsGiveTrivialPath) {
  const auto net = SubstrateNetwork::build(fixtures::star(2, 1));
  const auto p = shortest_path(net, "h1", "h1", 10.0);
  EXPECT_EQ(node_ids(net, p), std::vector<std::string>{"h1"});
  EXPECT_TRUE(p.links.empty());
  EXPECT_EQ(p.propagation_ms, 0.0);
}

TEST(Routing, LineIsForced) {
  const auto net = SubstrateNetwork::build(
      switches_only({"A", "B", "C"}, {{"", "A", "B", 100, 1.0}, {"", "B", "C", 100, 1.0}}));
  const auto p = shortest_path(net, "A", "C", 1.0);
  EXPECT_EQ(node_ids(net, p), (std::vector<std::string>{"A", "B", "C"}));
  EXPECT_EQ(p.propagation_ms, 2.0);
}

TEST(Routing, BandwidthFilterForcesDetour) {
  auto net = SubstrateNetwork::build(switches_only(
      {"A", "B", "C"}, {{"", "A", "B", 5, 1.0}, {"", "A", "C", 100, 1.0}, {"", "C", "B", 100, 1.0}}));
  EXPECT_EQ(node_ids(net, shortest_path(net, "A", "B", 1.0)), (std::vector<std::string>{"A", "B"}));
  EXPECT_EQ(node_ids(net, shortest_path(net, "A", "B", 10.0)), (std::vector<std::string>{"A", "C", "B"}));
  EXPECT_EQ(error_of([&] { shortest_path(net, "A", "B", 200.0); }), Errc::NoPath);
}

TEST(Routing, FilterUsesResidualNotCapacity) {
  auto net = SubstrateNetwork::build(switches_only(
      {"A", "B", "C"}, {{"", "A", "B", 20, 1.0}, {"", "A", "C", 100, 1.0}, {"", "C", "B", 100, 1.0}}));
  net.allocate_bandwidth("A-B", 15.0);
  EXPECT_EQ(node_ids(net, shortest_path(net, "A", "B", 10.0)), (std::vector<std::string>{"A", "C", "B"}));
}

TEST(Routing, TiesPreferFewerHopsThenLowerIds) {
  const auto net = SubstrateNetwork::build(switches_only(
      {"A", "B", "C", "D"},
      {{"", "A", "C", 10, 1.0}, {"", "C", "D", 10, 1.0}, {"", "A", "B", 10, 1.0}, {"", "B", "D", 10, 1.0}}));
  EXPECT_EQ(node_ids(net, shortest_path(net, "A", "D", 1.0)), (std::vector<std::string>{"A", "B", "D"}));

  const auto direct = SubstrateNetwork::build(switches_only(
      {"A", "B", "D"}, {{"", "A", "B", 10, 1.0}, {"", "B", "D", 10, 1.0}, {"", "A", "D", 10, 2.0}}));
  EXPECT_EQ(node_ids(direct, shortest_path(direct, "A", "D", 1.0)), (std::vector<std::string>{"A", "D"}));
}

TEST(Routing, UnknownEndpoint) {
  const auto net = SubstrateNetwork::build(fixtures::star(1, 1));
  EXPECT_EQ(error_of([&] { shortest_path(net, "h1", "zz", 1.0); }), Errc::UnknownNode);
}

TEST(RoutingProperty, MatchesBruteForceOnRandomGraphs) {
  Rng rng{20240611};
  for (int g = 0; g < 100; ++g) {
    const std::size_t n = 2 + rng.index(11);
    const auto net = SubstrateNetwork::build(oracles::random_graph(rng, n));
    for (NodeIndex src = 0; src < n; ++src) {
      for (NodeIndex dst = 0; dst < n; ++dst) {
        const double min_bw = rng.bernoulli(0.5) ? 0.0 : rng.uniform(1.0, 100.0);
        const double oracle = oracles::brute_force_path_cost(net, src, dst, min_bw);
        if (std::isinf(oracle)) {
          EXPECT_EQ(error_of([&] { shortest_path(net, src, dst, min_bw); }), Errc::NoPath);
          continue;
        }
        const auto p = shortest_path(net, src, dst, min_bw);
        ASSERT_EQ(p.propagation_ms, oracle) << "graph " << g << " " << src << "->" << dst;
        ASSERT_EQ(recomputed_cost(net, p), p.propagation_ms);
        ASSERT_EQ(p.nodes.front(), src);
        ASSERT_EQ(p.nodes.back(), dst);
        for (auto l : p.links) ASSERT_GE(net.residual_bandwidth(l), min_bw);
        ASSERT_EQ(shortest_path(net, src, dst, min_bw), p);
      }
    }
  }
}
