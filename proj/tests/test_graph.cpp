#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "graphkdd/graph.hpp"
#include "test_support.hpp"

using namespace graphkdd;
using test_support::graph_from_edges;
using test_support::make_record;

TEST(BuildGraph, NoAssignmentsGivesEmptyGraph) {
  const auto g = build_graph({}, {});
  EXPECT_EQ(g.node_count(), 0u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(BuildGraph, RepeatedAssignmentsAggregate) {
  std::vector<FlowRecord> recs = {make_record("http", 10, "normal", 1), make_record("http", 20, "normal", 2),
                                  make_record("http", 30, "normal", 3)};
  std::vector<EndpointAssignment> a = {{0, "A", "B"}, {1, "A", "B"}, {2, "A", "B"}};
  const auto g = build_graph(a, recs);
  ASSERT_EQ(g.edge_count(), 1u);
  const auto& e = g.edges()[0];
  EXPECT_EQ(e.weight.connection_count, 3u);
  EXPECT_EQ(e.weight.src_byte_total, 60u);
  EXPECT_EQ(e.weight.dst_byte_total, 6u);
}

TEST(BuildGraph, DirectionMatters) {
  std::vector<FlowRecord> recs(2, make_record());
  const auto g = build_graph({{0, "A", "B"}, {1, "B", "A"}}, recs);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_NE(g.find_edge(*g.index_of("A"), *g.index_of("B")), nullptr);
  EXPECT_NE(g.find_edge(*g.index_of("B"), *g.index_of("A")), nullptr);
}

TEST(BuildGraph, NodesOrderedNumericallyByAddress) {
  std::vector<FlowRecord> recs(1, make_record());
  const auto g = build_graph({{0, "198.18.10.1", "198.18.9.1"}}, recs);
  EXPECT_EQ(g.node(0), "198.18.9.1");
}

TEST(BuildGraph, PermutationInvariant) {
  std::mt19937 gen(3);
  std::vector<FlowRecord> recs;
  std::vector<EndpointAssignment> a;
  const char* names[] = {"198.18.0.1", "198.18.0.2", "198.18.0.3", "198.18.0.4", "198.18.0.5"};
  for (std::size_t i = 0; i < 200; ++i) {
    recs.push_back(make_record("http", static_cast<long>(gen() % 1000)));
    const auto s = gen() % 5;
    const auto d = (s + 1 + gen() % 4) % 5;
    a.push_back({i, names[s], names[d]});
  }
  const auto g1 = build_graph(a, recs);
  std::shuffle(a.begin(), a.end(), gen);
  const auto g2 = build_graph(a, recs);
  EXPECT_TRUE(g1 == g2);
  std::uint64_t total = 0;
  for (const auto& e : g1.edges()) total += e.weight.connection_count;
  EXPECT_EQ(total, 200u);
}

TEST(BuildGraph, RejectsSelfLoopsAndBadIndices) {
  std::vector<FlowRecord> recs(1, make_record());
  EXPECT_THROW(build_graph({{0, "A", "A"}}, recs), Error);
  EXPECT_THROW(build_graph({{3, "A", "B"}}, recs), Error);
}

TEST(Degrees, IsolatedCompleteAndPath) {
  const auto iso = graph_from_edges(3, {{0, 1}});
  EXPECT_EQ(out_degree(iso, "n2"), 0u);
  EXPECT_EQ(in_degree(iso, "n2"), 0u);
  EXPECT_EQ(total_degree(iso, "n2"), 0u);

  std::vector<std::pair<int, int>> k4;
  for (int u = 0; u < 4; ++u)
    for (int v = 0; v < 4; ++v)
      if (u != v) k4.emplace_back(u, v);
  const auto complete = graph_from_edges(4, k4);
  for (int v = 0; v < 4; ++v) {
    const auto name = "n" + std::to_string(v);
    EXPECT_EQ(out_degree(complete, name), 3u);
    EXPECT_EQ(in_degree(complete, name), 3u);
    EXPECT_EQ(total_degree(complete, name), 6u);
  }

  const auto path = graph_from_edges(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(out_degree(path, "n1"), 1u);
  EXPECT_EQ(in_degree(path, "n1"), 1u);
  EXPECT_EQ(total_degree(path, "n1"), 2u);
  EXPECT_THROW(out_degree(path, "nope"), Error);
}

TEST(Degrees, SumsEqualEdgeCount) {
  const auto g = test_support::graph_from(oracle::random_digraph(30, 0.2, 5));
  std::size_t out = 0, in = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out += g.out_neighbors(v).size();
    in += g.in_neighbors(v).size();
  }
  EXPECT_EQ(out, g.edge_count());
  EXPECT_EQ(in, g.edge_count());
}

TEST(ToUndirected, ReciprocalWeightsSum) {
  const FlowGraph g({"A", "B"}, {{0, 1, {2, 0, 0}}, {1, 0, {3, 0, 0}}});
  const auto u = to_undirected(g);
  EXPECT_DOUBLE_EQ(u.weight(0, 1), 5.0);
  EXPECT_DOUBLE_EQ(u.weight(1, 0), 5.0);
  EXPECT_EQ(u.edge_count(), 1u);
}

TEST(ToUndirected, NoReciprocalEdgesKeepsEdgeCount) {
  const auto g = graph_from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  const auto u = to_undirected(g);
  EXPECT_EQ(u.edge_count(), 4u);
  EXPECT_EQ(u.nodes(), g.nodes());
  EXPECT_EQ(to_undirected(FlowGraph{}).node_count(), 0u);
}

TEST(ToUndirected, AdjacencySumIsTwiceConnections) {
  const auto g = test_support::graph_from(oracle::random_digraph(25, 0.3, 8));
  const auto u = to_undirected(g);
  double sum = 0;
  for (NodeId v = 0; v < u.node_count(); ++v) sum += u.weighted_degree(v);
  EXPECT_DOUBLE_EQ(sum, 2.0 * static_cast<double>(g.edge_count()));
}

TEST(ExportGraph, DotHasOneEdgeStatement) {
  const auto g = graph_from_edges(2, {{0, 1}});
  const auto dot = export_graph(g, {}, ExportFormat::dot);
  std::size_t arrows = 0;
  for (auto pos = dot.find("->"); pos != std::string::npos; pos = dot.find("->", pos + 2)) ++arrows;
  EXPECT_EQ(arrows, 1u);
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
}

TEST(ExportGraph, CommunityAttributeOnEveryNode) {
  const auto g = graph_from_edges(3, {{0, 1}, {1, 2}});
  const NodeAttributes attrs{{"community", {"0", "0", "1"}}};
  const auto dot = export_graph(g, attrs, ExportFormat::dot);
  for (int v = 0; v < 3; ++v)
    EXPECT_NE(dot.find("n" + std::to_string(v) + " [label=\"n" + std::to_string(v) + "\", community="),
              std::string::npos);
  const auto xml = export_graph(g, attrs, "graphml");
  std::size_t data = 0;
  for (auto pos = xml.find("<data key=\"community\">"); pos != std::string::npos;
       pos = xml.find("<data key=\"community\">", pos + 1))
    ++data;
  EXPECT_EQ(data, 3u);
  EXPECT_NE(xml.find("edgedefault=\"directed\""), std::string::npos);
  EXPECT_NE(xml.find("attr.type=\"long\""), std::string::npos);
}

TEST(ExportGraph, DeterministicAndEscaped) {
  const FlowGraph g({"a\"b", "<c>"}, {{0, 1, {1, 5, 6}}});
  EXPECT_EQ(export_graph(g, {}, ExportFormat::graphml), export_graph(g, {}, ExportFormat::graphml));
  EXPECT_NE(export_graph(g, {}, ExportFormat::dot).find("\"a\\\"b\""), std::string::npos);
  EXPECT_NE(export_graph(g, {}, ExportFormat::graphml).find("&lt;c&gt;"), std::string::npos);
}

TEST(ExportGraph, UnknownFormatAndBadAttributes) {
  const auto g = graph_from_edges(2, {{0, 1}});
  try {
    export_graph(g, {}, "gexf");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownFormat);
  }
  EXPECT_THROW(export_graph(g, {{"community", {"0"}}}, ExportFormat::dot), Error);
  EXPECT_THROW(export_graph(g, {{"bad name", {"0", "1"}}}, ExportFormat::dot), Error);
}
