#pragma once

// Degree, betweenness, closeness and PageRank centrality on a FlowGraph.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <deque>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "graphkdd/dataset_io.hpp"
#include "graphkdd/error.hpp"
#include "graphkdd/graph.hpp"

namespace graphkdd {

struct DegreeCentrality {
  std::vector<double> total;
  std::vector<double> in;
  std::vector<double> out;
};

/// Degrees divided by n-1. `total` counts in + out, so it can exceed 1 when
/// reciprocal edges exist.
inline DegreeCentrality degree_centrality(const FlowGraph& g) {
  const auto n = g.node_count();
  if (n < 2) throw Error(ErrorCode::GraphTooSmall, "degree centrality needs n >= 2");
  const double scale = 1.0 / static_cast<double>(n - 1);
  DegreeCentrality dc;
  dc.total.resize(n);
  dc.in.resize(n);
  dc.out.resize(n);
  for (NodeId v = 0; v < n; ++v) {
    const auto in = static_cast<double>(g.in_neighbors(v).size());
    const auto out = static_cast<double>(g.out_neighbors(v).size());
    dc.in[v] = in * scale;
    dc.out[v] = out * scale;
    dc.total[v] = (in + out) * scale;
  }
  return dc;
}

namespace detail {

/// Brandes single-source accumulation, adding dependencies of `source` into `acc`.
struct BrandesWorkspace {
  explicit BrandesWorkspace(std::size_t n) : sigma(n), dist(n), delta(n) { order.reserve(n); }
  std::vector<double> sigma;
  std::vector<std::int64_t> dist;
  std::vector<double> delta;
  std::vector<NodeId> order;
  std::deque<NodeId> queue;

  void accumulate(const FlowGraph& g, NodeId source, std::vector<double>& acc) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(delta.begin(), delta.end(), 0.0);
    order.clear();
    sigma[source] = 1.0;
    dist[source] = 0;
    queue.push_back(source);
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (const auto w : g.out_neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto w = *it;
      for (const auto v : g.in_neighbors(w))
        if (dist[v] >= 0 && dist[v] + 1 == dist[w])
          delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != source) acc[w] += delta[w];
    }
  }
};

}  // namespace detail

/// Brandes betweenness over unweighted directed shortest paths, endpoints
/// excluded, normalized by (n-1)(n-2).
///
/// Sources are grouped into fixed blocks whose partial sums are merged in
/// ascending block order, so the result is bit-identical for every thread count.
inline std::vector<double> betweenness_centrality(const FlowGraph& g, unsigned threads = 1,
                                                  bool normalized = true) {
  const auto n = g.node_count();
  if (n < 3) throw Error(ErrorCode::GraphTooSmall, "betweenness needs n >= 3");
  constexpr std::size_t block_size = 32;
  constexpr std::size_t wave_blocks = 64;
  const std::size_t blocks = (n + block_size - 1) / block_size;
  threads = std::max(1u, threads);

  std::vector<double> result(n, 0.0);
  std::vector<std::vector<double>> partials(std::min(blocks, wave_blocks));
  for (std::size_t wave = 0; wave < blocks; wave += wave_blocks) {
    const std::size_t wave_end = std::min(blocks, wave + wave_blocks);
    std::atomic<std::size_t> next{wave};
    const auto work = [&] {
      detail::BrandesWorkspace ws(n);
      for (std::size_t b = next++; b < wave_end; b = next++) {
        auto& acc = partials[b - wave];
        acc.assign(n, 0.0);
        const auto last = std::min(n, (b + 1) * block_size);
        for (auto s = b * block_size; s < last; ++s) ws.accumulate(g, static_cast<NodeId>(s), acc);
      }
    };
    const auto workers = std::min<std::size_t>(threads, wave_end - wave);
    if (workers <= 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }
    for (std::size_t b = wave; b < wave_end; ++b)
      for (std::size_t v = 0; v < n; ++v) result[v] += partials[b - wave][v];
  }
  if (normalized) {
    const double scale = 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
    for (auto& x : result) x *= scale;
  }
  return result;
}

/// Incoming closeness with the reachable-set correction:
/// ((r-1)/sum d(u,v)) * ((r-1)/(n-1)), where r counts nodes reaching v (v included).
inline std::vector<double> closeness_centrality(const FlowGraph& g) {
  const auto n = g.node_count();
  if (n < 2) throw Error(ErrorCode::GraphTooSmall, "closeness needs n >= 2");
  std::vector<double> result(n, 0.0);
  std::vector<std::int64_t> dist(n);
  std::deque<NodeId> queue;
  for (NodeId v = 0; v < n; ++v) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[v] = 0;
    queue.push_back(v);
    std::int64_t total = 0;
    std::size_t reached = 0;
    while (!queue.empty()) {
      const auto x = queue.front();
      queue.pop_front();
      ++reached;
      total += dist[x];
      for (const auto u : g.in_neighbors(x))
        if (dist[u] < 0) {
          dist[u] = dist[x] + 1;
          queue.push_back(u);
        }
    }
    if (reached > 1 && total > 0) {
      const auto r1 = static_cast<double>(reached - 1);
      result[v] = (r1 / static_cast<double>(total)) * (r1 / static_cast<double>(n - 1));
    }
  }
  return result;
}

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-9;
  int max_iterations = 200;  // 0.85^k drops below 1e-9 only after ~130 steps on periodic graphs
};

/// Power iteration with uniform teleport; dangling mass is spread uniformly.
/// Stops when the L1 change between iterates falls below the tolerance.
inline std::vector<double> pagerank(const FlowGraph& g, const PageRankOptions& opt = {}) {
  const auto n = g.node_count();
  if (n == 0) throw Error(ErrorCode::GraphTooSmall, "pagerank needs n >= 1");
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> rank(n, inv_n);
  std::vector<double> next(n);
  std::vector<double> inv_out(n, 0.0);
  for (NodeId v = 0; v < n; ++v)
    if (const auto d = g.out_neighbors(v).size(); d > 0) inv_out[v] = 1.0 / static_cast<double>(d);

  double residual = 0.0;
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    double dangling = 0.0;
    for (NodeId v = 0; v < n; ++v)
      if (inv_out[v] == 0.0) dangling += rank[v];
    const double base = (1.0 - opt.damping) * inv_n + opt.damping * dangling * inv_n;
    for (NodeId v = 0; v < n; ++v) {
      double s = 0.0;
      for (const auto u : g.in_neighbors(v)) s += rank[u] * inv_out[u];
      next[v] = base + opt.damping * s;
    }
    residual = 0.0;
    for (NodeId v = 0; v < n; ++v) residual += std::abs(next[v] - rank[v]);
    rank.swap(next);
    if (residual < opt.tolerance) {
      double sum = 0.0;
      for (auto x : rank) sum += x;
      for (auto& x : rank) x /= sum;
      return rank;
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", residual);
  throw Error(ErrorCode::NoConvergence, "pagerank did not converge in " +
                                            std::to_string(opt.max_iterations) +
                                            " iterations (residual " + buf + ")");
}

/// Per-node centrality table keyed by node name.
struct NodeMetrics {
  std::vector<std::string> nodes;
  std::vector<double> degree;
  std::vector<double> in_degree;
  std::vector<double> out_degree;
  std::vector<double> betweenness;
  std::vector<double> closeness;
  std::vector<double> pagerank;
  std::vector<int> community;  // empty until communities are attached

  std::size_t size() const noexcept { return nodes.size(); }

  std::optional<std::size_t> index_of(const std::string& node) const {
    if (index_.size() != nodes.size()) {
      index_.clear();
      for (std::size_t i = 0; i < nodes.size(); ++i) index_.emplace(nodes[i], i);
    }
    const auto it = index_.find(node);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  mutable std::unordered_map<std::string, std::size_t> index_;
};

struct MetricsOptions {
  unsigned threads = 1;
  PageRankOptions pagerank;
};

inline NodeMetrics compute_metrics(const FlowGraph& g, const MetricsOptions& opt = {}) {
  NodeMetrics m;
  m.nodes = g.nodes();
  auto dc = degree_centrality(g);
  m.degree = std::move(dc.total);
  m.in_degree = std::move(dc.in);
  m.out_degree = std::move(dc.out);
  if (g.node_count() >= 3) m.betweenness = betweenness_centrality(g, opt.threads);
  else m.betweenness.assign(g.node_count(), 0.0);
  m.closeness = closeness_centrality(g);
  m.pagerank = pagerank(g, opt.pagerank);
  return m;
}

/// Header-bearing CSV keyed by IP; reals with six decimals.
inline void write_metrics(const NodeMetrics& m, std::ostream& out) {
  out << "ip,degree_centrality,in_degree_centrality,out_degree_centrality,betweenness,closeness,"
         "pagerank,community\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << m.nodes[i] << ',' << format_fixed6(m.degree[i]) << ',' << format_fixed6(m.in_degree[i])
        << ',' << format_fixed6(m.out_degree[i]) << ',' << format_fixed6(m.betweenness[i]) << ','
        << format_fixed6(m.closeness[i]) << ',' << format_fixed6(m.pagerank[i]) << ',';
    if (i < m.community.size()) out << m.community[i];
    out << '\n';
  }
  detail::check_stream(out);
}

inline NodeMetrics read_metrics(std::istream& in) {
  NodeMetrics m;
  std::string line;
  if (!std::getline(in, line) || detail::strip_cr(line).rfind("ip,degree_centrality", 0) != 0)
    throw Error(ErrorCode::SchemaMismatch, "node metrics file lacks its header");
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    const std::string_view view = detail::strip_cr(line);
    if (view.empty()) continue;
    const auto t = detail::split_commas(view);
    if (t.size() != 8)
      throw Error(ErrorCode::ColumnCountMismatch, "node metrics row " + std::to_string(row));
    std::array<double, 6> v{};
    for (std::size_t i = 0; i < 6; ++i) {
      const auto d = detail::parse_double(t[i + 1]);
      if (!d) throw Error(ErrorCode::NumericParseError, "node metrics row " + std::to_string(row));
      v[i] = *d;
    }
    m.nodes.emplace_back(t[0]);
    m.degree.push_back(v[0]);
    m.in_degree.push_back(v[1]);
    m.out_degree.push_back(v[2]);
    m.betweenness.push_back(v[3]);
    m.closeness.push_back(v[4]);
    m.pagerank.push_back(v[5]);
    if (const auto c = detail::parse_long(t[7])) m.community.push_back(static_cast<int>(*c));
  }
  if (!m.community.empty() && m.community.size() != m.nodes.size())
    throw Error(ErrorCode::SchemaMismatch, "node metrics community column partially filled");
  return m;
}

struct HistogramData {
  std::vector<double> edges;  // bin_count + 1, strictly increasing
  std::vector<std::size_t> counts;
};

/// Equal-width bins over [min, max]; the last bin is right-inclusive. When all
/// values coincide the range widens to [v - 0.5, v + 0.5].
inline HistogramData histogram(const std::vector<double>& values, std::size_t bin_count = 20) {
  if (values.empty()) throw Error(ErrorCode::EmptyMetrics, "histogram of no values");
  if (bin_count < 1) throw Error(ErrorCode::InvalidConfig, "bin_count must be >= 1");
  auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  HistogramData h;
  h.edges.resize(bin_count + 1);
  const double width = (hi - lo) / static_cast<double>(bin_count);
  for (std::size_t i = 0; i <= bin_count; ++i) h.edges[i] = lo + width * static_cast<double>(i);
  h.edges.back() = hi;
  h.counts.assign(bin_count, 0);
  for (const double x : values) {
    // upper_bound puts x into the bin whose left edge is the largest edge <= x.
    auto bin = static_cast<std::size_t>(std::upper_bound(h.edges.begin(), h.edges.end(), x) -
                                        h.edges.begin());
    bin = bin == 0 ? 0 : bin - 1;
    h.counts[std::min(bin, bin_count - 1)]++;
  }
  return h;
}

/// Histogram of total degree centrality.
inline HistogramData degree_histogram(const NodeMetrics& m, std::size_t bin_count = 20) {
  if (m.degree.empty()) throw Error(ErrorCode::EmptyMetrics, "no node metrics");
  return histogram(m.degree, bin_count);
}

/// `bin_upper_edge<TAB>count` lines.
inline void write_histogram(const HistogramData& h, std::ostream& out) {
  for (std::size_t i = 0; i < h.counts.size(); ++i)
    out << format_fixed6(h.edges[i + 1]) << '\t' << h.counts[i] << '\n';
  detail::check_stream(out);
}

}  // namespace graphkdd
