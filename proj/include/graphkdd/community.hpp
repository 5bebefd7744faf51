#pragma once

// Modularity and Louvain community detection on an UndirectedView.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "graphkdd/error.hpp"
#include "graphkdd/graph.hpp"
#include "graphkdd/rng.hpp"

namespace graphkdd {

struct CommunityAssignment {
  std::vector<int> community;  // dense ids 0..count-1, indexed like the view's nodes
  int count = 0;
  double modularity = 0.0;
};

/// Q = 1/(2m) * sum_uv [A_uv - resolution * k_u k_v / (2m)] * delta(c_u, c_v).
inline double modularity(const UndirectedView& view, const std::vector<int>& partition,
                         double resolution = 1.0) {
  if (view.total_weight() <= 0.0) throw Error(ErrorCode::EmptyGraph, "modularity undefined for m = 0");
  if (partition.size() != view.node_count())
    throw Error(ErrorCode::InvalidValue, "partition does not cover every node");
  const double two_m = 2.0 * view.total_weight();
  std::unordered_map<int, double> internal;
  std::unordered_map<int, double> total;
  for (NodeId u = 0; u < view.node_count(); ++u) {
    for (const auto& [v, w] : view.neighbors(u)) {
      total[partition[u]] += w;
      if (partition[u] == partition[v]) internal[partition[u]] += w;
    }
  }
  // Sum in ascending community id so the result does not depend on hash order.
  std::vector<int> ids;
  for (const auto& [c, _] : total) ids.push_back(c);
  std::sort(ids.begin(), ids.end());
  double q = 0.0;
  for (const int c : ids) {
    const double tot = total[c];
    q += internal[c] / two_m - resolution * (tot / two_m) * (tot / two_m);
  }
  return q;
}

/// Relabels ids densely in order of first appearance over node index.
inline int densify(std::vector<int>& partition) {
  std::unordered_map<int, int> relabel;
  for (auto& c : partition) {
    const auto [it, inserted] = relabel.emplace(c, static_cast<int>(relabel.size()));
    c = it->second;
  }
  return static_cast<int>(relabel.size());
}

struct LouvainOptions {
  std::uint64_t seed = 0;
  double resolution = 1.0;
  double min_gain = 1e-9;
  /// Called after every aggregation level with (level, modularity of the full partition).
  std::function<void(int, double)> on_level;
};

namespace detail {

// Weighted graph with self-loops, used for the aggregated levels.
struct LouvainGraph {
  std::vector<std::vector<std::pair<int, double>>> adj;  // no self entries
  std::vector<double> self_loop;                         // A_ii
  std::vector<double> degree;                            // k_i, self-loop included

  std::size_t size() const { return adj.size(); }
};

inline LouvainGraph louvain_graph_from(const UndirectedView& view) {
  LouvainGraph g;
  const auto n = view.node_count();
  g.adj.resize(n);
  g.self_loop.assign(n, 0.0);
  g.degree.assign(n, 0.0);
  for (NodeId u = 0; u < n; ++u)
    for (const auto& [v, w] : view.neighbors(u)) {
      g.adj[u].emplace_back(static_cast<int>(v), w);
      g.degree[u] += w;
    }
  return g;
}

/// One round of local moves; returns true if any node changed community.
inline bool louvain_local_moves(const LouvainGraph& g, std::vector<int>& comm, double two_m,
                                double resolution, Rng& rng) {
  const auto n = g.size();
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[comm[i]] += g.degree[i];

  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
  std::vector<double> link(n, 0.0);
  std::vector<int> touched;

  bool any_move = false;
  constexpr int max_sweeps = 1000;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    rng.shuffle(order);
    bool moved = false;
    for (const int i : order) {
      const int own = comm[i];
      const double k = g.degree[i];
      touched.clear();
      for (const auto& [j, w] : g.adj[i]) {
        const int c = comm[j];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += w;
      }
      tot[own] -= k;
      const auto gain = [&](int c) { return link[c] - resolution * tot[c] * k / two_m; };
      int best = own;
      double best_gain = gain(own);
      std::sort(touched.begin(), touched.end());
      for (const int c : touched)
        if (c != own && gain(c) > best_gain + 1e-12 * two_m) {
          best = c;
          best_gain = gain(c);
        }
      tot[best] += k;
      for (const int c : touched) link[c] = 0.0;
      link[own] = 0.0;
      if (best != own) {
        comm[i] = best;
        moved = true;
      }
    }
    if (!moved) break;
    any_move = true;
  }
  return any_move;
}

inline LouvainGraph louvain_aggregate(const LouvainGraph& g, const std::vector<int>& comm, int count) {
  LouvainGraph out;
  out.adj.resize(count);
  out.self_loop.assign(count, 0.0);
  out.degree.assign(count, 0.0);
  std::vector<std::unordered_map<int, double>> acc(count);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const int ci = comm[i];
    out.self_loop[ci] += g.self_loop[i];
    out.degree[ci] += g.degree[i];
    for (const auto& [j, w] : g.adj[i]) {
      const int cj = comm[j];
      if (ci == cj) out.self_loop[ci] += w;
      else acc[ci][cj] += w;
    }
  }
  for (int c = 0; c < count; ++c) {
    out.adj[c].assign(acc[c].begin(), acc[c].end());
    std::sort(out.adj[c].begin(), out.adj[c].end());
  }
  return out;
}

}  // namespace detail

/// Two-phase Louvain: seeded-order local moves, then aggregation, repeated
/// until a level improves modularity by no more than min_gain.
inline CommunityAssignment louvain(const UndirectedView& view, const LouvainOptions& opt) {
  if (view.total_weight() <= 0.0) throw Error(ErrorCode::EmptyGraph, "louvain needs m > 0");
  const double two_m = 2.0 * view.total_weight();
  Rng rng(opt.seed);

  std::vector<int> membership(view.node_count());
  for (std::size_t i = 0; i < membership.size(); ++i) membership[i] = static_cast<int>(i);
  double q = modularity(view, membership, opt.resolution);

  auto level_graph = detail::louvain_graph_from(view);
  for (int level = 0;; ++level) {
    std::vector<int> comm(level_graph.size());
    for (std::size_t i = 0; i < comm.size(); ++i) comm[i] = static_cast<int>(i);
    if (!detail::louvain_local_moves(level_graph, comm, two_m, opt.resolution, rng)) break;
    const int count = densify(comm);

    std::vector<int> candidate = membership;
    for (auto& c : candidate) c = comm[c];
    const double q_new = modularity(view, candidate, opt.resolution);
    if (q_new - q <= opt.min_gain) break;
    membership = std::move(candidate);
    q = q_new;
    if (opt.on_level) opt.on_level(level, q);
    level_graph = detail::louvain_aggregate(level_graph, comm, count);
  }

  CommunityAssignment result;
  result.count = densify(membership);
  result.community = std::move(membership);
  result.modularity = modularity(view, result.community);
  return result;
}

inline CommunityAssignment louvain(const UndirectedView& view, std::uint64_t seed,
                                   double resolution = 1.0) {
  LouvainOptions opt;
  opt.seed = seed;
  opt.resolution = resolution;
  return louvain(view, opt);
}

/// `ip<TAB>community_id` lines in node order.
inline void write_partition(const UndirectedView& view, const CommunityAssignment& ca,
                            std::ostream& out) {
  for (std::size_t i = 0; i < view.node_count(); ++i)
    out << view.nodes()[i] << '\t' << ca.community.at(i) << '\n';
  detail::check_stream(out);
}

}  // namespace graphkdd
