#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "graphkdd/centrality.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace graphkdd;
using test_support::graph_from;
using test_support::graph_from_edges;

namespace {

FlowGraph complete(int n) {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (u != v) e.emplace_back(u, v);
  return graph_from_edges(n, e);
}

/// 50 random digraphs with 3..8 nodes and mixed densities.
std::vector<oracle::Adjacency> suite() {
  std::vector<oracle::Adjacency> out;
  for (std::uint32_t i = 0; i < 50; ++i) {
    const int n = 3 + static_cast<int>(i % 6);
    const double p = 0.15 + 0.1 * static_cast<double>(i % 7);
    out.push_back(oracle::random_digraph(n, p, 1000 + i));
  }
  return out;
}

}  // namespace

TEST(DegreeCentrality, OutwardStar) {
  const auto g = graph_from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
  const auto dc = degree_centrality(g);
  EXPECT_DOUBLE_EQ(dc.out[0], 1.0);
  for (int leaf = 1; leaf < 4; ++leaf) EXPECT_DOUBLE_EQ(dc.in[leaf], 1.0 / 3.0);
}

TEST(DegreeCentrality, CompleteDigraphTotalIsTwo) {
  const auto dc = degree_centrality(complete(4));
  for (double x : dc.total) EXPECT_DOUBLE_EQ(x, 2.0);
}

TEST(DegreeCentrality, IsolatedNodeAndTooSmall) {
  const auto dc = degree_centrality(graph_from_edges(3, {{0, 1}}));
  EXPECT_EQ(dc.total[2], 0.0);
  EXPECT_EQ(dc.in[2], 0.0);
  EXPECT_EQ(dc.out[2], 0.0);
  try {
    degree_centrality(graph_from_edges(1, {}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GraphTooSmall);
  }
}

TEST(DegreeCentrality, AddingAnEdgeNeverDecreases) {
  auto adj = oracle::random_digraph(12, 0.2, 4);
  auto before = degree_centrality(graph_from(adj));
  for (int step = 0; step < 20; ++step) {
    const int u = (step * 5) % 12;
    const int v = (step * 7 + 3) % 12;
    if (u == v) continue;
    adj[u][v] = true;
    const auto after = degree_centrality(graph_from(adj));
    EXPECT_GE(after.out[u], before.out[u]);
    EXPECT_GE(after.in[v], before.in[v]);
    before = after;
  }
}

TEST(Betweenness, PathMiddleNode) {
  const auto bc = betweenness_centrality(graph_from_edges(3, {{0, 1}, {1, 2}}));
  EXPECT_DOUBLE_EQ(bc[1], 0.5);
  EXPECT_DOUBLE_EQ(bc[0], 0.0);
  EXPECT_DOUBLE_EQ(bc[2], 0.0);
}

TEST(Betweenness, CompleteDigraphIsZero) {
  for (double x : betweenness_centrality(complete(5))) EXPECT_EQ(x, 0.0);
}

TEST(Betweenness, TooSmall) { EXPECT_THROW(betweenness_centrality(graph_from_edges(2, {{0, 1}})), Error); }

TEST(Betweenness, MatchesPathEnumerationOracle) {
  for (const auto& adj : suite()) {
    const auto expected = oracle::betweenness(adj);
    const auto got = betweenness_centrality(graph_from(adj));
    for (std::size_t v = 0; v < adj.size(); ++v) {
      EXPECT_NEAR(got[v], expected[v], 1e-9);
      EXPECT_GE(got[v], 0.0);
      EXPECT_LE(got[v], 1.0);
    }
  }
}

TEST(Betweenness, ThreadCountDoesNotChangeResult) {
  const auto g = graph_from(oracle::random_digraph(150, 0.05, 12));
  const auto serial = betweenness_centrality(g, 1);
  for (unsigned t : {2u, 3u, 8u}) EXPECT_EQ(betweenness_centrality(g, t), serial);
}

TEST(Closeness, PathEndpoint) {
  const auto c = closeness_centrality(graph_from_edges(3, {{0, 1}, {1, 2}}));
  EXPECT_DOUBLE_EQ(c[2], 2.0 / 3.0);
  EXPECT_EQ(c[0], 0.0);  // nothing reaches the source
}

TEST(Closeness, CompleteDigraphIsOne) {
  for (double x : closeness_centrality(complete(6))) EXPECT_DOUBLE_EQ(x, 1.0);
}

TEST(Closeness, MatchesFloydWarshallOracle) {
  for (const auto& adj : suite()) {
    const auto expected = oracle::closeness(adj);
    const auto got = closeness_centrality(graph_from(adj));
    for (std::size_t v = 0; v < adj.size(); ++v) {
      EXPECT_NEAR(got[v], expected[v], 1e-9);
      EXPECT_GE(got[v], 0.0);
      EXPECT_LE(got[v], 1.0);
    }
  }
}

TEST(PageRank, TwoCycleIsUniform) {
  for (double d : {0.5, 0.85, 0.99}) {
    const auto pr = pagerank(graph_from_edges(2, {{0, 1}, {1, 0}}), {d, 1e-9, 100});
    EXPECT_NEAR(pr[0], 0.5, 1e-12);
    EXPECT_NEAR(pr[1], 0.5, 1e-12);
  }
}

TEST(PageRank, SingleNode) {
  const auto pr = pagerank(graph_from_edges(1, {}));
  ASSERT_EQ(pr.size(), 1u);
  EXPECT_DOUBLE_EQ(pr[0], 1.0);
  EXPECT_THROW(pagerank(FlowGraph{}), Error);
}

TEST(PageRank, ChainMatchesDenseSolve) {
  oracle::Adjacency adj(3, std::vector<bool>(3, false));
  adj[0][1] = adj[1][2] = true;
  const auto expected = oracle::pagerank(adj, 0.85);
  const auto got = pagerank(graph_from(adj));
  for (int v = 0; v < 3; ++v) EXPECT_NEAR(got[v], expected[v], 1e-8);
}

TEST(PageRank, RandomDigraphsMatchDenseSolve) {
  for (const auto& adj : suite()) {
    const auto expected = oracle::pagerank(adj, 0.85);
    const auto got = pagerank(graph_from(adj));
    double sum = 0;
    for (std::size_t v = 0; v < adj.size(); ++v) {
      EXPECT_NEAR(got[v], expected[v], 1e-8);
      EXPECT_GT(got[v], 0.0);
      sum += got[v];
    }
    EXPECT_NEAR(sum, 1.0, 1e-6);
  }
}

TEST(PageRank, NoConvergenceReportsResidual) {
  const auto g = graph_from(oracle::random_digraph(20, 0.2, 1));
  try {
    pagerank(g, {0.85, 1e-9, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoConvergence);
    EXPECT_NE(std::string(e.what()).find("residual"), std::string::npos);
  }
}

TEST(Histogram, EqualValuesFillOneBin) {
  const auto h = histogram({0.3, 0.3, 0.3}, 5);
  EXPECT_EQ(std::count_if(h.counts.begin(), h.counts.end(), [](auto c) { return c > 0; }), 1);
  EXPECT_EQ(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}), 3u);
}

TEST(Histogram, TwoValuesTwoBins) {
  const auto h = histogram({0, 1, 1, 0, 1}, 2);
  ASSERT_EQ(h.counts.size(), 2u);
  EXPECT_EQ(h.counts[0], 2u);
  EXPECT_EQ(h.counts[1], 3u);  // right-inclusive last bin
  EXPECT_DOUBLE_EQ(h.edges.back(), 1.0);
}

TEST(Histogram, EdgesIncreaseAndCountsCoverAllNodes) {
  const auto g = graph_from(oracle::random_digraph(300, 0.2, 42));
  NodeMetrics m;
  m.degree = degree_centrality(g).total;
  const auto h = degree_histogram(m, 20);
  EXPECT_EQ(h.edges.size(), 21u);
  for (std::size_t i = 1; i < h.edges.size(); ++i) EXPECT_LT(h.edges[i - 1], h.edges[i]);
  EXPECT_EQ(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}), 300u);
  EXPECT_GE(std::count_if(h.counts.begin(), h.counts.end(), [](auto c) { return c > 0; }), 2);
}

TEST(Histogram, EmptyMetricsAndBadBins) {
  try {
    degree_histogram(NodeMetrics{}, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyMetrics);
  }
  EXPECT_THROW(histogram({1.0}, 0), Error);
}

TEST(Histogram, TextFormat) {
  std::ostringstream out;
  write_histogram(histogram({0, 1}, 2), out);
  EXPECT_EQ(out.str(), "0.500000\t1\n1.000000\t1\n");
}

TEST(NodeMetricsTable, RoundTrip) {
  const auto g = graph_from(oracle::random_digraph(10, 0.3, 2));
  auto m = compute_metrics(g);
  m.community.assign(m.size(), 1);
  std::stringstream buf;
  write_metrics(m, buf);
  const auto back = read_metrics(buf);
  EXPECT_EQ(back.nodes, m.nodes);
  EXPECT_EQ(back.community, m.community);
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_NEAR(back.pagerank[i], m.pagerank[i], 5e-7);
  EXPECT_EQ(*back.index_of("n3"), 3u);
}
