#pragma once

// Source-endpoint x service bipartite view.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "graphkdd/dataset_io.hpp"
#include "graphkdd/error.hpp"
#include "graphkdd/graph.hpp"
#include "graphkdd/synth.hpp"

namespace graphkdd {

/// Prefix keeping service nodes distinct from endpoint nodes.
inline constexpr std::string_view service_prefix = "svc:";

struct BipartiteEdge {
  std::uint32_t left;   // index into left()
  std::uint32_t right;  // index into right()
  std::uint64_t weight;
};

class BipartiteGraph {
 public:
  BipartiteGraph() = default;
  BipartiteGraph(std::vector<std::string> left, std::vector<std::string> right,
                 std::vector<BipartiteEdge> edges)
      : left_(std::move(left)), right_(std::move(right)), edges_(std::move(edges)) {}

  /// Source endpoint IPs, sorted.
  const std::vector<std::string>& left() const noexcept { return left_; }
  /// Service names without prefix, sorted.
  const std::vector<std::string>& right() const noexcept { return right_; }
  /// Edges sorted by (left, right).
  const std::vector<BipartiteEdge>& edges() const noexcept { return edges_; }

 private:
  std::vector<std::string> left_;
  std::vector<std::string> right_;
  std::vector<BipartiteEdge> edges_;
};

/// Edge (src_ip, service) weighted by the number of records with that pair.
inline BipartiteGraph build_bipartite(const std::vector<FlowRecord>& records,
                                      const std::vector<EndpointAssignment>& assignments,
                                      const DatasetSchema& schema = DatasetSchema::nsl_kdd()) {
  if (records.size() != assignments.size())
    throw Error(ErrorCode::InvalidValue, "assignments do not align with records");
  const auto service_col = schema.feature_index("service");
  if (!service_col) throw Error(ErrorCode::SchemaMismatch, "schema has no 'service' column");

  std::map<std::pair<std::string, std::string>, std::uint64_t> counts;
  for (const auto& a : assignments)
    counts[{a.src_ip, records.at(a.record_index).features[*service_col]}]++;

  std::vector<std::string> left;
  std::vector<std::string> right;
  for (const auto& [key, _] : counts) {
    left.push_back(key.first);
    right.push_back(key.second);
  }
  std::sort(left.begin(), left.end(), node_name_less);
  left.erase(std::unique(left.begin(), left.end()), left.end());
  std::sort(right.begin(), right.end());
  right.erase(std::unique(right.begin(), right.end()), right.end());

  const auto index_in = [](const std::vector<std::string>& v, const std::string& s, auto less) {
    return static_cast<std::uint32_t>(std::lower_bound(v.begin(), v.end(), s, less) - v.begin());
  };
  std::vector<BipartiteEdge> edges;
  edges.reserve(counts.size());
  for (const auto& [key, w] : counts)
    edges.push_back({index_in(left, key.first, node_name_less),
                     index_in(right, key.second, std::less<>{}), w});
  std::sort(edges.begin(), edges.end(), [](const BipartiteEdge& a, const BipartiteEdge& b) {
    return std::tie(a.left, a.right) < std::tie(b.left, b.right);
  });
  return BipartiteGraph(std::move(left), std::move(right), std::move(edges));
}

/// Unweighted degree per node; service nodes keyed with the `svc:` prefix.
inline std::map<std::string, std::size_t> bipartite_degrees(const BipartiteGraph& bg) {
  std::map<std::string, std::size_t> deg;
  for (const auto& e : bg.edges()) {
    deg[bg.left()[e.left]]++;
    deg[std::string(service_prefix) + bg.right()[e.right]]++;
  }
  return deg;
}

/// One-mode projection onto sources; weight = number of shared services.
inline UndirectedView project_left(const BipartiteGraph& bg) {
  std::vector<std::vector<NodeId>> users(bg.right().size());
  for (const auto& e : bg.edges()) users[e.right].push_back(e.left);
  std::vector<std::tuple<NodeId, NodeId, double>> edges;
  for (const auto& list : users)
    for (std::size_t a = 0; a < list.size(); ++a)
      for (std::size_t b = a + 1; b < list.size(); ++b) edges.emplace_back(list[a], list[b], 1.0);
  return UndirectedView(bg.left(), edges);
}

/// Directed endpoint->service graph plus a `side` attribute, ready for export_graph.
inline std::pair<FlowGraph, NodeAttributes> bipartite_for_export(const BipartiteGraph& bg) {
  std::vector<std::string> nodes = bg.left();
  std::vector<std::string> side(bg.left().size(), "endpoint");
  for (const auto& s : bg.right()) {
    nodes.push_back(std::string(service_prefix) + s);
    side.emplace_back("service");
  }
  const auto offset = static_cast<NodeId>(bg.left().size());
  std::vector<FlowEdge> edges;
  edges.reserve(bg.edges().size());
  for (const auto& e : bg.edges()) edges.push_back({e.left, offset + e.right, {e.weight, 0, 0}});
  return {FlowGraph(std::move(nodes), edges), NodeAttributes{{"side", std::move(side)}}};
}

}  // namespace graphkdd
