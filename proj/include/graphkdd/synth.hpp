#pragma once

// Synthetic endpoint generation, G(n,p) connection pool, and record-to-edge assignment.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "graphkdd/dataset_io.hpp"
#include "graphkdd/error.hpp"
#include "graphkdd/rng.hpp"

namespace graphkdd {

namespace ipv4 {

/// 198.18.0.0/15, reserved for benchmarking and never routed.
inline constexpr std::uint32_t block_base = 0xC6120000u;
inline constexpr std::uint32_t block_mask = 0xFFFE0000u;
/// Usable host addresses: the block minus its network and broadcast address.
inline constexpr std::uint32_t host_capacity = (1u << 17) - 2;

inline std::string to_string(std::uint32_t addr) {
  return std::to_string(addr >> 24) + '.' + std::to_string((addr >> 16) & 0xFF) + '.' +
         std::to_string((addr >> 8) & 0xFF) + '.' + std::to_string(addr & 0xFF);
}

inline std::optional<std::uint32_t> parse(std::string_view text) {
  std::uint32_t addr = 0;
  for (int octet = 0; octet < 4; ++octet) {
    const auto dot = text.find('.');
    const auto part = octet < 3 ? text.substr(0, dot) : text;
    if ((octet < 3 && dot == std::string_view::npos) || part.empty() || part.size() > 3)
      return std::nullopt;
    const auto v = detail::parse_long(part);
    if (!v || *v < 0 || *v > 255) return std::nullopt;
    addr = (addr << 8) | static_cast<std::uint32_t>(*v);
    if (octet < 3) text.remove_prefix(dot + 1);
  }
  return addr;
}

inline bool in_block(std::uint32_t addr) { return (addr & block_mask) == block_base; }

/// Host address for offset 1..host_capacity within the block.
inline std::uint32_t host(std::uint32_t offset) { return block_base + offset; }

}  // namespace ipv4

struct SynthConfig {
  std::size_t node_count = 300;
  double edge_probability = 0.2;
  std::uint64_t seed = 42;

  void validate() const {
    if (node_count < 2)
      throw Error(ErrorCode::InvalidConfig, "node_count must be >= 2");
    if (!(edge_probability > 0.0 && edge_probability <= 1.0))
      throw Error(ErrorCode::InvalidConfig, "edge_probability must lie in (0, 1]");
  }
};

/// Directed pair of indices into the endpoint list.
struct EdgeRef {
  std::uint32_t src;
  std::uint32_t dst;
  auto operator<=>(const EdgeRef&) const = default;
};

struct EndpointAssignment {
  std::size_t record_index;
  std::string src_ip;
  std::string dst_ip;
};

/// Draws node_count distinct host addresses from 198.18.0.0/15, returned in
/// ascending numeric order.
inline std::vector<std::string> generate_endpoints(const SynthConfig& config) {
  config.validate();
  if (config.node_count > ipv4::host_capacity)
    throw Error(ErrorCode::CapacityExceeded,
                "node_count " + std::to_string(config.node_count) + " exceeds block capacity " +
                    std::to_string(ipv4::host_capacity));
  Rng rng(config.seed + seed_offset::endpoints);
  // Sparse Fisher-Yates over offsets 1..capacity.
  std::unordered_map<std::uint32_t, std::uint32_t> swapped;
  const auto at = [&](std::uint32_t i) {
    const auto it = swapped.find(i);
    return it == swapped.end() ? i + 1 : it->second;
  };
  std::vector<std::uint32_t> picked;
  picked.reserve(config.node_count);
  for (std::uint32_t i = 0; i < config.node_count; ++i) {
    const auto j = i + static_cast<std::uint32_t>(rng.below(ipv4::host_capacity - i));
    const auto vi = at(i);
    const auto vj = at(j);
    swapped[j] = vi;
    picked.push_back(vj);
  }
  std::sort(picked.begin(), picked.end());
  std::vector<std::string> out;
  out.reserve(picked.size());
  for (auto off : picked) out.push_back(ipv4::to_string(ipv4::host(off)));
  return out;
}

/// Includes each ordered non-self pair independently with probability
/// edge_probability. An empty draw is retried with the next sub-seed, up to 8 times.
inline std::vector<EdgeRef> generate_edge_pool(const std::vector<std::string>& endpoints,
                                               const SynthConfig& config) {
  config.validate();
  if (endpoints.size() != config.node_count)
    throw Error(ErrorCode::InvalidConfig, "endpoint count does not match node_count");
  const auto n = static_cast<std::uint32_t>(endpoints.size());
  constexpr int max_retries = 8;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    Rng rng(config.seed + seed_offset::edge_pool + static_cast<std::uint64_t>(attempt));
    std::vector<EdgeRef> pool;
    for (std::uint32_t u = 0; u < n; ++u)
      for (std::uint32_t v = 0; v < n; ++v)
        if (u != v && rng.bernoulli(config.edge_probability)) pool.push_back({u, v});
    if (!pool.empty()) return pool;
  }
  throw Error(ErrorCode::EmptyEdgePool,
              "edge pool empty after " + std::to_string(max_retries) + " retries");
}

/// Gives every record one edge drawn uniformly from the pool.
inline std::vector<EndpointAssignment> assign_endpoints(std::size_t record_count,
                                                        const std::vector<std::string>& endpoints,
                                                        const std::vector<EdgeRef>& pool,
                                                        std::uint64_t seed) {
  if (pool.empty()) throw Error(ErrorCode::EmptyEdgePool, "cannot assign from an empty edge pool");
  Rng rng(seed + seed_offset::assignment);
  std::vector<EndpointAssignment> out;
  out.reserve(record_count);
  for (std::size_t i = 0; i < record_count; ++i) {
    const auto& e = pool[static_cast<std::size_t>(rng.below(pool.size()))];
    out.push_back({i, endpoints.at(e.src), endpoints.at(e.dst)});
  }
  return out;
}

inline std::vector<EndpointAssignment> assign_endpoints(const std::vector<FlowRecord>& records,
                                                        const std::vector<std::string>& endpoints,
                                                        const std::vector<EdgeRef>& pool,
                                                        std::uint64_t seed) {
  return assign_endpoints(records.size(), endpoints, pool, seed);
}

/// Audit export: one `src<TAB>dst` line per pool edge.
inline void write_edge_pool(const std::vector<std::string>& endpoints,
                            const std::vector<EdgeRef>& pool, std::ostream& out) {
  for (const auto& e : pool) out << endpoints.at(e.src) << '\t' << endpoints.at(e.dst) << '\n';
  detail::check_stream(out);
}

/// Reads a pool written by write_edge_pool, resolving IPs against `endpoints`.
inline std::vector<EdgeRef> read_edge_pool(std::istream& in,
                                           const std::vector<std::string>& endpoints) {
  std::unordered_map<std::string, std::uint32_t> index;
  for (std::uint32_t i = 0; i < endpoints.size(); ++i) index.emplace(endpoints[i], i);
  std::vector<EdgeRef> pool;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view view = detail::strip_cr(line);
    if (view.empty()) continue;
    const auto tab = view.find('\t');
    if (tab == std::string_view::npos)
      throw Error(ErrorCode::InvalidValue, "edge pool line lacks a tab: " + line);
    const auto s = index.find(std::string(view.substr(0, tab)));
    const auto d = index.find(std::string(view.substr(tab + 1)));
    if (s == index.end() || d == index.end())
      throw Error(ErrorCode::UnknownNode, "edge pool references unknown endpoint: " + line);
    pool.push_back({s->second, d->second});
  }
  return pool;
}

/// Consistent, injective original -> pseudonym mapping inside 198.18.0.0/15.
class PseudonymMap {
 public:
  /// Returns the stored pseudonym, allocating the lowest unused host address on first use.
  std::string pseudonymize(const std::string& original) {
    if (const auto it = forward_.find(original); it != forward_.end())
      return ipv4::to_string(it->second);
    check_original(original);
    while (next_offset_ <= ipv4::host_capacity && reverse_.count(ipv4::host(next_offset_)))
      ++next_offset_;
    if (next_offset_ > ipv4::host_capacity)
      throw Error(ErrorCode::CapacityExceeded, "pseudonym block exhausted");
    const auto addr = ipv4::host(next_offset_++);
    forward_.emplace(original, addr);
    reverse_.emplace(addr, original);
    return ipv4::to_string(addr);
  }

  /// Records an explicit pairing; rejects anything that would break injectivity.
  void bind(const std::string& original, const std::string& pseudonym) {
    check_original(original);
    const auto addr = ipv4::parse(pseudonym);
    if (!addr || !ipv4::in_block(*addr) || (*addr & ~ipv4::block_mask) == 0 ||
        (*addr & ~ipv4::block_mask) == ipv4::host_capacity + 1)
      throw Error(ErrorCode::InvalidValue, "pseudonym '" + pseudonym + "' outside 198.18.0.0/15 hosts");
    const auto f = forward_.find(original);
    const auto r = reverse_.find(*addr);
    if (f != forward_.end() || r != reverse_.end()) {
      if (f != forward_.end() && f->second == *addr) return;
      throw Error(ErrorCode::InvalidValue, "binding '" + original + "' -> " + pseudonym +
                                               " conflicts with an existing entry");
    }
    forward_.emplace(original, *addr);
    reverse_.emplace(*addr, original);
  }

  std::optional<std::string> find(const std::string& original) const {
    const auto it = forward_.find(original);
    if (it == forward_.end()) return std::nullopt;
    return ipv4::to_string(it->second);
  }

  std::optional<std::string> original_of(const std::string& pseudonym) const {
    const auto addr = ipv4::parse(pseudonym);
    if (!addr) return std::nullopt;
    const auto it = reverse_.find(*addr);
    if (it == reverse_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const noexcept { return forward_.size(); }

  /// Every allocated pseudonym in ascending address order.
  std::vector<std::string> pseudonyms() const {
    std::vector<std::string> out;
    out.reserve(reverse_.size());
    for (const auto& [addr, _] : reverse_) out.push_back(ipv4::to_string(addr));
    return out;
  }

  /// `original<TAB>pseudonym` lines sorted by original.
  void save(std::ostream& out) const {
    for (const auto& [orig, addr] : forward_) out << orig << '\t' << ipv4::to_string(addr) << '\n';
    detail::check_stream(out);
  }

  static PseudonymMap load(std::istream& in) {
    PseudonymMap map;
    std::string line;
    while (std::getline(in, line)) {
      const std::string_view view = detail::strip_cr(line);
      if (view.empty()) continue;
      const auto tab = view.find('\t');
      if (tab == std::string_view::npos)
        throw Error(ErrorCode::InvalidValue, "pseudonym line lacks a tab: " + line);
      map.bind(std::string(view.substr(0, tab)), std::string(view.substr(tab + 1)));
    }
    return map;
  }

 private:
  static void check_original(const std::string& original) {
    if (original.find_first_of("\t\r\n") != std::string::npos)
      throw Error(ErrorCode::InvalidValue, "original identifier contains tab or newline");
  }

  std::map<std::string, std::uint32_t> forward_;
  std::map<std::uint32_t, std::string> reverse_;
  std::uint32_t next_offset_ = 1;
};

}  // namespace graphkdd
