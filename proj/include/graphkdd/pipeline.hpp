#pragma once

// Stage orchestration shared by the CLI and the integration tests. Every
// stage reads and writes artifacts in one output directory.

#include <openssl/evp.h>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "graphkdd/bipartite.hpp"
#include "graphkdd/centrality.hpp"
#include "graphkdd/community.hpp"
#include "graphkdd/dataset_io.hpp"
#include "graphkdd/enrich.hpp"
#include "graphkdd/error.hpp"
#include "graphkdd/graph.hpp"
#include "graphkdd/rng.hpp"
#include "graphkdd/select_eval.hpp"
#include "graphkdd/synth.hpp"

namespace graphkdd {

namespace fs = std::filesystem;

/// Which graph feeds the degree histogram: the generated G(n,p) pool or the
/// record-weighted graph used for enrichment.
enum class HistogramSource { pool, records };

struct PipelineConfig {
  fs::path input;
  fs::path out_dir = "out";
  std::optional<fs::path> schema_path;
  std::size_t nodes = 300;
  double edge_probability = 0.2;
  std::uint64_t seed = 42;
  std::optional<std::size_t> limit;
  std::size_t k = 50;
  std::size_t bins = 20;
  ExportFormat format = ExportFormat::dot;
  unsigned threads = 1;
  double epsilon = 0.01;
  HistogramSource histogram_source = HistogramSource::pool;
  Scorer scorer = Scorer::anova;
  double resolution = 1.0;
  int max_depth = 8;
};

namespace artifact {
inline constexpr const char* enriched = "enriched.csv";
inline constexpr const char* pseudonyms = "pseudonyms.tsv";
inline constexpr const char* edge_pool = "edge_pool.tsv";
inline constexpr const char* node_metrics = "node_metrics.csv";
inline constexpr const char* partition = "partition.tsv";
inline constexpr const char* histogram = "histogram.tsv";
inline constexpr const char* ranking = "ranking.tsv";
inline constexpr const char* eval_baseline = "eval_baseline.txt";
inline constexpr const char* eval_enriched = "eval_enriched.txt";
inline constexpr const char* eval_comparison = "eval_comparison.txt";
inline constexpr const char* manifest = "manifest.txt";

inline std::string graph(ExportFormat f) { return "graph." + std::string(extension(f)); }
inline std::string communities(ExportFormat f) { return "communities." + std::string(extension(f)); }
inline std::string bipartite(ExportFormat f) { return "bipartite." + std::string(extension(f)); }
}  // namespace artifact

/// Lowercase hex SHA-256 of a byte string.
inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::IoError, "sha256 failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i)
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return out.str();
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

// ---------------------------------------------------------------------------
// Manifest: sorted key=value lines. Artifact digests live under `sha256.<file>`.

using Manifest = std::map<std::string, std::string>;

inline Manifest read_manifest(const fs::path& dir) {
  Manifest m;
  const auto path = dir / artifact::manifest;
  if (!fs::exists(path)) return m;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) m[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return m;
}

inline void write_manifest(const fs::path& dir, const Manifest& m) {
  std::ostringstream out;
  for (const auto& [k, v] : m) out << k << '=' << v << '\n';
  write_file(dir / artifact::manifest, out.str());
}

/// Names of artifacts whose recorded digest no longer matches the file.
inline std::vector<std::string> verify_manifest(const fs::path& dir) {
  std::vector<std::string> bad;
  for (const auto& [key, digest] : read_manifest(dir)) {
    if (key.rfind("sha256.", 0) != 0) continue;
    const auto name = key.substr(7);
    if (!fs::exists(dir / name) || sha256_hex(read_file(dir / name)) != digest) bad.push_back(name);
  }
  return bad;
}

namespace detail {

/// Writes artifacts and records their digests in the manifest.
class ArtifactWriter {
 public:
  ArtifactWriter(fs::path dir, Manifest manifest) : dir_(std::move(dir)), manifest_(std::move(manifest)) {}

  void put(const std::string& name, const std::string& content) {
    write_file(dir_ / name, content);
    manifest_["sha256." + name] = sha256_hex(content);
  }

  template <class Fn>
  void put_stream(const std::string& name, Fn&& fn) {
    std::ostringstream out;
    fn(out);
    put(name, out.str());
  }

  void set(const std::string& key, const std::string& value) { manifest_[key] = value; }
  void commit() const { write_manifest(dir_, manifest_); }

 private:
  fs::path dir_;
  Manifest manifest_;
};

template <class Fn>
auto stage(const char* name, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string("stage '") + name + "': " + e.detail());
  }
}

inline DatasetSchema load_schema(const PipelineConfig& c) {
  if (!c.schema_path) return DatasetSchema::nsl_kdd();
  if (!fs::exists(*c.schema_path))
    throw Error(ErrorCode::MissingInput, "schema file not found: " + c.schema_path->string());
  std::ifstream in(*c.schema_path);
  return DatasetSchema::parse(in);
}

inline fs::path require_artifact(const PipelineConfig& c, const std::string& name,
                                 const char* producer) {
  const auto path = c.out_dir / name;
  if (!fs::exists(path))
    throw Error(ErrorCode::MissingArtifact,
                path.string() + " not found; run '" + producer + "' first");
  return path;
}

inline std::vector<EnrichedRecord> load_enriched(const PipelineConfig& c, const DatasetSchema& schema) {
  const auto path = require_artifact(c, artifact::enriched, "enrich");
  std::ifstream in(path);
  return read_enriched(in, schema);
}

inline std::string to_string(HistogramSource s) { return s == HistogramSource::pool ? "pool" : "records"; }

inline std::string describe(double v) { return format_fixed6(v); }

/// The three graph exports: plain, community-attributed, bipartite.
inline void write_exports(ArtifactWriter& w, ExportFormat format, const FlowGraph& graph,
                          const std::vector<int>& community, const BipartiteGraph& bg) {
  w.put(artifact::graph(format), export_graph(graph, {}, format));
  std::vector<std::string> comm;
  for (const int c : community) comm.push_back(std::to_string(c));
  w.put(artifact::communities(format), export_graph(graph, {{"community", std::move(comm)}}, format));
  const auto [bgraph, battrs] = bipartite_for_export(bg);
  w.put(artifact::bipartite(format), export_graph(bgraph, battrs, format));
}

}  // namespace detail

/// Summary of an enrich run, for CLI reporting.
struct EnrichSummary {
  std::size_t records = 0;
  std::size_t pool_edges = 0;
  std::size_t graph_nodes = 0;
  std::size_t graph_edges = 0;
  int communities = 0;
  double modularity = 0;
};

/// Full enrichment: parse, synthesize endpoints, build the record graph,
/// compute metrics and communities, and write every artifact plus the manifest.
inline EnrichSummary run_enrich(const PipelineConfig& c) {
  if (!fs::exists(c.input) || fs::is_directory(c.input))
    throw Error(ErrorCode::MissingInput, "input file not found: " + c.input.string());
  const auto schema = detail::stage("schema", [&] { return detail::load_schema(c); });
  const std::string input_text = read_file(c.input);
  const auto records = detail::stage("parse", [&] {
    std::istringstream in(input_text);
    return parse_dataset(in, schema, c.limit);
  });

  SynthConfig sc{c.nodes, c.edge_probability, c.seed};
  const auto endpoints = detail::stage("synth", [&] { return generate_endpoints(sc); });
  const auto pool = detail::stage("synth", [&] { return generate_edge_pool(endpoints, sc); });
  const auto assignments = detail::stage("synth", [&] { return assign_endpoints(records, endpoints, pool, c.seed); });
  PseudonymMap pseudonyms;
  const auto width = std::to_string(endpoints.size() - 1).size();
  for (std::size_t i = 0; i < endpoints.size(); ++i) {
    auto id = std::to_string(i);
    pseudonyms.bind("host-" + std::string(width - id.size(), '0') + id, endpoints[i]);
  }

  const auto graph = detail::stage("graph", [&] { return build_graph(assignments, records, schema); });
  auto metrics = detail::stage("centrality", [&] {
    MetricsOptions mo;
    mo.threads = c.threads;
    return compute_metrics(graph, mo);
  });
  const auto view = to_undirected(graph);
  const auto communities = detail::stage("community", [&] {
    if (view.total_weight() == 0) {
      // No edges at all (no records): every node is its own community.
      CommunityAssignment ca;
      for (std::size_t i = 0; i < view.node_count(); ++i) ca.community.push_back(static_cast<int>(i));
      ca.count = static_cast<int>(view.node_count());
      return ca;
    }
    return louvain(view, c.seed + seed_offset::louvain, c.resolution);
  });
  metrics.community = communities.community;

  const auto histogram_values = detail::stage("histogram", [&] {
    if (c.histogram_source == HistogramSource::pool)
      return degree_centrality(graph_from_pool(endpoints, pool)).total;
    return metrics.degree;
  });
  const auto hist = detail::stage("histogram", [&] { return histogram(histogram_values, c.bins); });

  const auto enriched = detail::stage("enrich", [&] { return enrich(records, assignments, metrics, communities); });
  const auto bg = detail::stage("bipartite", [&] { return build_bipartite(records, assignments, schema); });

  fs::create_directories(c.out_dir);
  detail::ArtifactWriter w(c.out_dir, {});
  w.set("config.input", c.input.string());
  w.set("config.input_sha256", sha256_hex(input_text));
  w.set("config.schema", c.schema_path ? c.schema_path->string() : "nsl-kdd");
  w.set("config.nodes", std::to_string(c.nodes));
  w.set("config.edge_prob", detail::describe(c.edge_probability));
  w.set("config.seed", std::to_string(c.seed));
  w.set("config.limit", c.limit ? std::to_string(*c.limit) : "none");
  w.set("config.bins", std::to_string(c.bins));
  w.set("config.format", std::string(extension(c.format)));
  w.set("config.histogram_source", detail::to_string(c.histogram_source));
  w.set("config.resolution", detail::describe(c.resolution));
  w.set("result.records", std::to_string(records.size()));
  w.set("result.pool_edges", std::to_string(pool.size()));
  w.set("result.communities", std::to_string(communities.count));
  w.set("result.modularity", detail::describe(communities.modularity));

  w.put_stream(artifact::enriched, [&](std::ostream& o) { write_enriched(enriched, schema, o); });
  w.put_stream(artifact::pseudonyms, [&](std::ostream& o) { pseudonyms.save(o); });
  w.put_stream(artifact::edge_pool, [&](std::ostream& o) { write_edge_pool(endpoints, pool, o); });
  w.put_stream(artifact::node_metrics, [&](std::ostream& o) { write_metrics(metrics, o); });
  w.put_stream(artifact::partition, [&](std::ostream& o) { write_partition(view, communities, o); });
  w.put_stream(artifact::histogram, [&](std::ostream& o) { write_histogram(hist, o); });
  detail::stage("export", [&] {
    detail::write_exports(w, c.format, graph, communities.community, bg);
    return 0;
  });
  w.commit();

  return {records.size(), pool.size(), graph.node_count(), graph.edge_count(), communities.count,
          communities.modularity};
}

/// Ranks the enriched CSV's features and writes ranking.tsv.
inline FeatureRanking run_rank(const PipelineConfig& c) {
  const auto schema = detail::load_schema(c);
  const auto records = detail::stage("rank", [&] { return detail::load_enriched(c, schema); });
  const auto ranking = detail::stage("rank", [&] {
    const auto table = encode(make_table(records, schema, FeatureSet::enriched));
    return rank_features(table, labels_of(records), c.k, c.scorer);
  });
  detail::ArtifactWriter w(c.out_dir, read_manifest(c.out_dir));
  w.set("config.k", std::to_string(c.k));
  w.set("config.scorer", c.scorer == Scorer::anova ? "anova" : "chi2");
  w.put_stream(artifact::ranking, [&](std::ostream& o) { write_ranking(ranking, o); });
  w.commit();
  return ranking;
}

/// Baseline and enriched trees on one stratified split; writes three reports.
inline Experiment run_evaluate(const PipelineConfig& c) {
  const auto schema = detail::load_schema(c);
  const auto records = detail::stage("evaluate", [&] { return detail::load_enriched(c, schema); });
  const auto exp = detail::stage("evaluate", [&] {
    return run_experiment(records, schema, c.seed + seed_offset::split, c.max_depth, c.epsilon);
  });
  detail::ArtifactWriter w(c.out_dir, read_manifest(c.out_dir));
  w.set("config.epsilon", detail::describe(c.epsilon));
  w.set("config.max_depth", std::to_string(c.max_depth));
  w.put_stream(artifact::eval_baseline, [&](std::ostream& o) { write_report(exp.baseline, o); });
  w.put_stream(artifact::eval_enriched, [&](std::ostream& o) { write_report(exp.enriched, o); });
  w.put_stream(artifact::eval_comparison, [&](std::ostream& o) { write_comparison(exp.comparison, o); });
  w.commit();
  return exp;
}

/// Rebuilds the degree histogram from enrich's artifacts.
inline HistogramData run_histogram(const PipelineConfig& c) {
  const auto hist = detail::stage("histogram", [&] {
    std::vector<double> values;
    if (c.histogram_source == HistogramSource::pool) {
      std::ifstream pin(detail::require_artifact(c, artifact::pseudonyms, "enrich"));
      std::ifstream ein(detail::require_artifact(c, artifact::edge_pool, "enrich"));
      const auto endpoints = PseudonymMap::load(pin).pseudonyms();
      values = degree_centrality(graph_from_pool(endpoints, read_edge_pool(ein, endpoints))).total;
    } else {
      std::ifstream in(detail::require_artifact(c, artifact::node_metrics, "enrich"));
      values = read_metrics(in).degree;
    }
    return histogram(values, c.bins);
  });
  detail::ArtifactWriter w(c.out_dir, read_manifest(c.out_dir));
  w.set("config.bins", std::to_string(c.bins));
  w.set("config.histogram_source", detail::to_string(c.histogram_source));
  w.put_stream(artifact::histogram, [&](std::ostream& o) { write_histogram(hist, o); });
  w.commit();
  return hist;
}

/// Re-exports the plain, community and bipartite views from the enriched CSV.
inline void run_export(const PipelineConfig& c) {
  const auto schema = detail::load_schema(c);
  const auto enriched = detail::stage("export", [&] { return detail::load_enriched(c, schema); });
  std::vector<FlowRecord> records;
  std::vector<EndpointAssignment> assignments;
  for (std::size_t i = 0; i < enriched.size(); ++i) {
    records.push_back(enriched[i].record);
    assignments.push_back({i, enriched[i].src_ip, enriched[i].dst_ip});
  }
  const auto graph = build_graph(assignments, records, schema);
  std::vector<int> community(graph.node_count(), 0);
  for (const auto& e : enriched) {
    community[graph.require(e.src_ip)] = e.src.community;
    community[graph.require(e.dst_ip)] = e.dst.community;
  }
  const auto bg = build_bipartite(records, assignments, schema);
  detail::ArtifactWriter w(c.out_dir, read_manifest(c.out_dir));
  detail::stage("export", [&] {
    detail::write_exports(w, c.format, graph, community, bg);
    return 0;
  });
  w.commit();
}

}  // namespace graphkdd
