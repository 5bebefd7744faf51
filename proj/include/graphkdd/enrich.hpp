#pragma once

// Joins per-endpoint graph metrics onto flow records.

#include <string>
#include <vector>

#include "graphkdd/centrality.hpp"
#include "graphkdd/community.hpp"
#include "graphkdd/dataset_io.hpp"
#include "graphkdd/error.hpp"
#include "graphkdd/synth.hpp"

namespace graphkdd {

/// `communities` is indexed like `metrics.nodes`.
inline std::vector<EnrichedRecord> enrich(const std::vector<FlowRecord>& records,
                                          const std::vector<EndpointAssignment>& assignments,
                                          const NodeMetrics& metrics,
                                          const CommunityAssignment& communities) {
  if (assignments.size() != records.size())
    throw Error(ErrorCode::InvalidValue, "assignment count differs from record count");
  if (communities.community.size() != metrics.size())
    throw Error(ErrorCode::MissingMetrics, "community assignment does not cover the metric nodes");

  const auto lookup = [&](const std::string& ip) {
    const auto idx = metrics.index_of(ip);
    if (!idx) throw Error(ErrorCode::MissingMetrics, "no metrics for endpoint " + ip);
    EndpointFeatures f;
    f.degree_centrality = metrics.degree[*idx];
    f.in_degree_centrality = metrics.in_degree[*idx];
    f.out_degree_centrality = metrics.out_degree[*idx];
    f.betweenness = metrics.betweenness[*idx];
    f.closeness = metrics.closeness[*idx];
    f.pagerank = metrics.pagerank[*idx];
    f.community = communities.community[*idx];
    return f;
  };

  std::vector<EnrichedRecord> out;
  out.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& a = assignments[i];
    if (a.record_index != i)
      throw Error(ErrorCode::InvalidValue, "assignments must be in record order");
    out.push_back({records[i], a.src_ip, a.dst_ip, lookup(a.src_ip), lookup(a.dst_ip)});
  }
  return out;
}

}  // namespace graphkdd
