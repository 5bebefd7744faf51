#pragma once

// Directed flow graph, its symmetrized view, and DOT/GraphML export.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "graphkdd/dataset_io.hpp"
#include "graphkdd/error.hpp"
#include "graphkdd/synth.hpp"

namespace graphkdd {

using NodeId = std::uint32_t;

struct EdgeWeight {
  std::uint64_t connection_count = 0;
  std::uint64_t src_byte_total = 0;
  std::uint64_t dst_byte_total = 0;
  bool operator==(const EdgeWeight&) const = default;
};

struct FlowEdge {
  NodeId src;
  NodeId dst;
  EdgeWeight weight;
  bool operator==(const FlowEdge&) const = default;
};

/// Orders node names numerically when both are IPv4, lexically otherwise.
inline bool node_name_less(const std::string& a, const std::string& b) {
  const auto pa = ipv4::parse(a);
  const auto pb = ipv4::parse(b);
  if (pa && pb) return *pa < *pb;
  if (pa != pb) return pa.has_value();  // addresses before other names
  return a < b;
}

/// Simple weighted digraph, immutable once built. Nodes are indexed 0..n-1.
class FlowGraph {
 public:
  FlowGraph() = default;

  /// Builds from a node list and a multi-edge list; repeated (u,v) entries are
  /// summed into one edge. Self-loops are rejected.
  FlowGraph(std::vector<std::string> nodes, const std::vector<FlowEdge>& multi_edges)
      : nodes_(std::move(nodes)) {
    for (NodeId i = 0; i < nodes_.size(); ++i)
      if (!index_.emplace(nodes_[i], i).second)
        throw Error(ErrorCode::InvalidValue, "duplicate node '" + nodes_[i] + "'");
    std::map<std::pair<NodeId, NodeId>, EdgeWeight> agg;
    for (const auto& e : multi_edges) {
      if (e.src >= nodes_.size() || e.dst >= nodes_.size())
        throw Error(ErrorCode::UnknownNode, "edge endpoint index out of range");
      if (e.src == e.dst) throw Error(ErrorCode::InvalidValue, "self-loop on '" + nodes_[e.src] + "'");
      auto& w = agg[{e.src, e.dst}];
      w.connection_count += e.weight.connection_count;
      w.src_byte_total += e.weight.src_byte_total;
      w.dst_byte_total += e.weight.dst_byte_total;
    }
    out_.resize(nodes_.size());
    in_.resize(nodes_.size());
    edges_.reserve(agg.size());
    for (const auto& [key, w] : agg) {
      edges_.push_back({key.first, key.second, w});
      out_[key.first].push_back(key.second);
      in_[key.second].push_back(key.first);
    }
    for (auto& list : in_) std::sort(list.begin(), list.end());
  }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  const std::string& node(NodeId v) const { return nodes_.at(v); }
  /// Edges sorted by (src, dst).
  const std::vector<FlowEdge>& edges() const noexcept { return edges_; }

  std::optional<NodeId> index_of(const std::string& name) const {
    const auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  NodeId require(const std::string& name) const {
    const auto id = index_of(name);
    if (!id) throw Error(ErrorCode::UnknownNode, "node '" + name + "' not in graph");
    return *id;
  }

  std::span<const NodeId> out_neighbors(NodeId v) const { return out_.at(v); }
  std::span<const NodeId> in_neighbors(NodeId v) const { return in_.at(v); }

  const FlowEdge* find_edge(NodeId u, NodeId v) const {
    const auto it = std::lower_bound(
        edges_.begin(), edges_.end(), std::pair{u, v},
        [](const FlowEdge& e, const std::pair<NodeId, NodeId>& k) {
          return std::pair{e.src, e.dst} < k;
        });
    if (it == edges_.end() || it->src != u || it->dst != v) return nullptr;
    return &*it;
  }

  bool operator==(const FlowGraph& o) const { return nodes_ == o.nodes_ && edges_ == o.edges_; }

 private:
  std::vector<std::string> nodes_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<FlowEdge> edges_;
  std::vector<std::vector<NodeId>> out_;
  std::vector<std::vector<NodeId>> in_;
};

/// Graph over the pool endpoints, one unit-count edge per pool pair.
inline FlowGraph graph_from_pool(const std::vector<std::string>& endpoints,
                                 const std::vector<EdgeRef>& pool) {
  std::vector<FlowEdge> edges;
  edges.reserve(pool.size());
  for (const auto& e : pool) edges.push_back({e.src, e.dst, {1, 0, 0}});
  return FlowGraph(endpoints, edges);
}

/// Nodes are every IP in the assignments (sorted); each assignment adds one
/// connection plus its record's byte counts to edge (src, dst).
inline FlowGraph build_graph(const std::vector<EndpointAssignment>& assignments,
                             const std::vector<FlowRecord>& records,
                             const DatasetSchema& schema = DatasetSchema::nsl_kdd()) {
  std::vector<std::string> nodes;
  for (const auto& a : assignments) {
    nodes.push_back(a.src_ip);
    nodes.push_back(a.dst_ip);
  }
  std::sort(nodes.begin(), nodes.end(), node_name_less);
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::unordered_map<std::string, NodeId> index;
  for (NodeId i = 0; i < nodes.size(); ++i) index.emplace(nodes[i], i);

  const auto src_col = schema.feature_index("src_bytes");
  const auto dst_col = schema.feature_index("dst_bytes");
  const auto bytes = [](const FlowRecord& r, std::optional<std::size_t> col) -> std::uint64_t {
    if (!col) return 0;
    return static_cast<std::uint64_t>(std::llround(r.values.at(*col)));
  };

  std::vector<FlowEdge> edges;
  edges.reserve(assignments.size());
  for (const auto& a : assignments) {
    if (a.record_index >= records.size())
      throw Error(ErrorCode::InvalidValue,
                  "assignment references record " + std::to_string(a.record_index));
    const auto& r = records[a.record_index];
    edges.push_back({index.at(a.src_ip), index.at(a.dst_ip), {1, bytes(r, src_col), bytes(r, dst_col)}});
  }
  return FlowGraph(std::move(nodes), edges);
}

inline std::size_t out_degree(const FlowGraph& g, const std::string& v) {
  return g.out_neighbors(g.require(v)).size();
}
inline std::size_t in_degree(const FlowGraph& g, const std::string& v) {
  return g.in_neighbors(g.require(v)).size();
}
inline std::size_t total_degree(const FlowGraph& g, const std::string& v) {
  const auto id = g.require(v);
  return g.out_neighbors(id).size() + g.in_neighbors(id).size();
}

/// Symmetric weighted graph without self-loops.
class UndirectedView {
 public:
  using Neighbor = std::pair<NodeId, double>;

  UndirectedView() = default;

  /// Builds from (u, v, w) triples; both orientations of a pair accumulate into one edge.
  UndirectedView(std::vector<std::string> nodes,
                 const std::vector<std::tuple<NodeId, NodeId, double>>& edges)
      : nodes_(std::move(nodes)), adj_(nodes_.size()) {
    std::map<std::pair<NodeId, NodeId>, double> agg;
    for (const auto& [u, v, w] : edges) {
      if (u >= nodes_.size() || v >= nodes_.size())
        throw Error(ErrorCode::UnknownNode, "edge endpoint index out of range");
      if (u == v) throw Error(ErrorCode::InvalidValue, "self-loop in undirected view");
      agg[{std::min(u, v), std::max(u, v)}] += w;
    }
    for (const auto& [key, w] : agg) {
      adj_[key.first].emplace_back(key.second, w);
      adj_[key.second].emplace_back(key.first, w);
      total_weight_ += w;
    }
    edge_count_ = agg.size();
    for (auto& list : adj_) std::sort(list.begin(), list.end());
  }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  const std::vector<std::string>& nodes() const noexcept { return nodes_; }
  std::span<const Neighbor> neighbors(NodeId v) const { return adj_.at(v); }
  /// Sum of edge weights (m); the adjacency matrix sums to 2m.
  double total_weight() const noexcept { return total_weight_; }

  double weight(NodeId u, NodeId v) const {
    const auto& list = adj_.at(u);
    const auto it = std::lower_bound(list.begin(), list.end(), Neighbor{v, -INFINITY});
    return it != list.end() && it->first == v ? it->second : 0.0;
  }

  double weighted_degree(NodeId v) const {
    double k = 0;
    for (const auto& [_, w] : adj_.at(v)) k += w;
    return k;
  }

 private:
  std::vector<std::string> nodes_;
  std::vector<std::vector<Neighbor>> adj_;
  std::size_t edge_count_ = 0;
  double total_weight_ = 0;
};

/// weight(u,v) = connection_count(u->v) + connection_count(v->u).
inline UndirectedView to_undirected(const FlowGraph& g) {
  std::vector<std::tuple<NodeId, NodeId, double>> edges;
  edges.reserve(g.edge_count());
  for (const auto& e : g.edges())
    edges.emplace_back(e.src, e.dst, static_cast<double>(e.weight.connection_count));
  return UndirectedView(g.nodes(), edges);
}

// ---------------------------------------------------------------------------
// Export

enum class ExportFormat { dot, graphml };

inline ExportFormat parse_export_format(std::string_view name) {
  if (name == "dot") return ExportFormat::dot;
  if (name == "graphml") return ExportFormat::graphml;
  throw Error(ErrorCode::UnknownFormat, "unknown export format '" + std::string(name) + "'");
}

inline std::string_view extension(ExportFormat f) { return f == ExportFormat::dot ? "dot" : "graphml"; }

/// Attribute name -> one value per node (indexed like the graph's nodes).
using NodeAttributes = std::map<std::string, std::vector<std::string>>;

namespace detail {

inline std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

inline bool all_integers(const std::vector<std::string>& values) {
  return std::all_of(values.begin(), values.end(),
                     [](const std::string& v) { return parse_long(v).has_value(); });
}

inline std::string export_dot(const FlowGraph& g, const NodeAttributes& attrs) {
  std::ostringstream out;
  out << "digraph flows {\n";
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << "  n" << v << " [label=" << dot_quote(g.node(v));
    for (const auto& [name, values] : attrs) out << ", " << name << '=' << dot_quote(values[v]);
    out << "];\n";
  }
  for (const auto& e : g.edges())
    out << "  n" << e.src << " -> n" << e.dst << " [connections=" << e.weight.connection_count
        << ", src_bytes=" << e.weight.src_byte_total << ", dst_bytes=" << e.weight.dst_byte_total
        << "];\n";
  out << "}\n";
  return out.str();
}

inline std::string export_graphml(const FlowGraph& g, const NodeAttributes& attrs) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
         "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
         "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
         "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n";
  out << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n";
  for (const auto& [name, values] : attrs)
    out << "  <key id=\"" << xml_escape(name) << "\" for=\"node\" attr.name=\"" << xml_escape(name)
        << "\" attr.type=\"" << (all_integers(values) ? "long" : "string") << "\"/>\n";
  out << "  <key id=\"connections\" for=\"edge\" attr.name=\"connections\" attr.type=\"long\"/>\n"
         "  <key id=\"src_bytes\" for=\"edge\" attr.name=\"src_bytes\" attr.type=\"long\"/>\n"
         "  <key id=\"dst_bytes\" for=\"edge\" attr.name=\"dst_bytes\" attr.type=\"long\"/>\n";
  out << "  <graph id=\"flows\" edgedefault=\"directed\">\n";
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << "    <node id=\"n" << v << "\">\n"
        << "      <data key=\"label\">" << xml_escape(g.node(v)) << "</data>\n";
    for (const auto& [name, values] : attrs)
      out << "      <data key=\"" << xml_escape(name) << "\">" << xml_escape(values[v]) << "</data>\n";
    out << "    </node>\n";
  }
  std::size_t id = 0;
  for (const auto& e : g.edges())
    out << "    <edge id=\"e" << id++ << "\" source=\"n" << e.src << "\" target=\"n" << e.dst
        << "\">\n"
        << "      <data key=\"connections\">" << e.weight.connection_count << "</data>\n"
        << "      <data key=\"src_bytes\">" << e.weight.src_byte_total << "</data>\n"
        << "      <data key=\"dst_bytes\">" << e.weight.dst_byte_total << "</data>\n"
        << "    </edge>\n";
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

}  // namespace detail

/// Renders the graph with per-node attributes; nodes and edges in index order.
inline std::string export_graph(const FlowGraph& g, const NodeAttributes& attrs, ExportFormat format) {
  for (const auto& [name, values] : attrs) {
    if (values.size() != g.node_count())
      throw Error(ErrorCode::SchemaMismatch, "attribute '" + name + "' has wrong length");
    const bool ident = !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
    if (!ident || name == "label")
      throw Error(ErrorCode::InvalidValue, "attribute name '" + name + "' not usable");
  }
  return format == ExportFormat::dot ? detail::export_dot(g, attrs) : detail::export_graphml(g, attrs);
}

inline std::string export_graph(const FlowGraph& g, const NodeAttributes& attrs, std::string_view format) {
  return export_graph(g, attrs, parse_export_format(format));
}

}  // namespace graphkdd
