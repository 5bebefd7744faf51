// graphkdd: enrich NSL-KDD flow records with graph features.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "graphkdd/pipeline.hpp"
#include "graphkdd/sample_data.hpp"

namespace {

using namespace graphkdd;

constexpr int exit_usage = 2;
constexpr int exit_pipeline = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingInput:
    case ErrorCode::MissingArtifact:
    case ErrorCode::ColumnCountMismatch:
    case ErrorCode::NumericParseError:
    case ErrorCode::InvalidValue:
    case ErrorCode::InvalidConfig:
    case ErrorCode::SchemaMismatch:
    case ErrorCode::UnknownFormat:
    case ErrorCode::CapacityExceeded:
      return exit_usage;
    default:
      return exit_pipeline;
  }
}

struct Options {
  PipelineConfig config;
  std::string format = "dot";
  std::string histogram_source = "pool";
  std::string scorer = "anova";
  std::string schema;
  std::size_t limit = 0;
};

void add_common(CLI::App* cmd, Options& o, bool needs_input) {
  auto* input = cmd->add_option("--input", o.config.input, "NSL-KDD file (comma-separated, no header)");
  if (needs_input) input->required();
  cmd->add_option("--out-dir", o.config.out_dir, "artifact directory")->capture_default_str();
  cmd->add_option("--schema", o.schema, "column schema override (name,kind per line)");
  cmd->add_option("--nodes", o.config.nodes, "synthetic endpoint count")->capture_default_str();
  cmd->add_option("--edge-prob", o.config.edge_probability, "G(n,p) edge probability")->capture_default_str();
  cmd->add_option("--seed", o.config.seed, "master seed")->capture_default_str();
  cmd->add_option("--limit", o.limit, "keep only the first N records (0 = all)");
  cmd->add_option("--k", o.config.k, "top-k cut for ranking")->capture_default_str();
  cmd->add_option("--bins", o.config.bins, "histogram bins")->capture_default_str();
  cmd->add_option("--format", o.format, "graph export format")
      ->check(CLI::IsMember({"dot", "graphml"}))
      ->capture_default_str();
  cmd->add_option("--threads", o.config.threads, "betweenness worker threads")->capture_default_str();
  cmd->add_option("--epsilon", o.config.epsilon, "non-degradation tolerance")->capture_default_str();
  cmd->add_option("--histogram-source", o.histogram_source, "graph used for the degree histogram")
      ->check(CLI::IsMember({"pool", "records"}))
      ->capture_default_str();
  cmd->add_option("--scorer", o.scorer, "univariate scorer")
      ->check(CLI::IsMember({"anova", "chi2"}))
      ->capture_default_str();
  cmd->add_option("--resolution", o.config.resolution, "Louvain resolution")->capture_default_str();
  cmd->add_option("--max-depth", o.config.max_depth, "decision tree depth")->capture_default_str();
}

PipelineConfig finalize(Options& o) {
  auto c = o.config;
  c.format = parse_export_format(o.format);
  c.histogram_source = o.histogram_source == "records" ? HistogramSource::records : HistogramSource::pool;
  c.scorer = o.scorer == "chi2" ? Scorer::chi2 : Scorer::anova;
  if (!o.schema.empty()) c.schema_path = o.schema;
  if (o.limit > 0) c.limit = o.limit;
  SynthConfig{c.nodes, c.edge_probability, c.seed}.validate();
  if (c.bins < 1) throw Error(ErrorCode::InvalidConfig, "--bins must be >= 1");
  return c;
}

void print_report(const char* title, const EvalReport& r) {
  std::cout << title << ": accuracy=" << format_fixed6(r.accuracy)
            << " precision=" << format_fixed6(r.precision) << " recall=" << format_fixed6(r.recall)
            << " f1=" << format_fixed6(r.f1) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-feature enrichment for NSL-KDD flow records"};
  app.require_subcommand(1);

  Options o;
  auto* enrich_cmd = app.add_subcommand("enrich", "run the full enrichment pipeline");
  add_common(enrich_cmd, o, true);
  auto* rank_cmd = app.add_subcommand("rank", "rank features of the enriched CSV");
  add_common(rank_cmd, o, false);
  auto* eval_cmd = app.add_subcommand("evaluate", "compare baseline and enriched classifiers");
  add_common(eval_cmd, o, false);
  auto* hist_cmd = app.add_subcommand("histogram", "rebuild the degree-centrality histogram");
  add_common(hist_cmd, o, false);
  auto* export_cmd = app.add_subcommand("export", "re-export graph views in --format");
  add_common(export_cmd, o, false);

  std::size_t sample_rows = 5000;
  std::uint64_t sample_seed = 7;
  std::string sample_out;
  auto* sample_cmd = app.add_subcommand("sample", "write synthetic NSL-KDD-format rows");
  sample_cmd->add_option("--rows", sample_rows, "row count")->capture_default_str();
  sample_cmd->add_option("--seed", sample_seed, "generator seed")->capture_default_str();
  sample_cmd->add_option("--output", sample_out, "output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_usage;
  }

  try {
    if (sample_cmd->parsed()) {
      std::ofstream out(sample_out, std::ios::binary);
      out << generate_nslkdd_sample(sample_rows, sample_seed);
      if (!out) throw Error(ErrorCode::IoError, "cannot write " + sample_out);
      std::cout << "wrote " << sample_rows << " rows to " << sample_out << '\n';
      return 0;
    }

    const auto config = finalize(o);
    if (enrich_cmd->parsed()) {
      const auto s = run_enrich(config);
      std::cout << "records=" << s.records << " pool_edges=" << s.pool_edges
                << " graph_nodes=" << s.graph_nodes << " graph_edges=" << s.graph_edges
                << " communities=" << s.communities << " modularity=" << format_fixed6(s.modularity)
                << '\n'
                << "artifacts written to " << config.out_dir.string() << '\n';
    } else if (rank_cmd->parsed()) {
      const auto ranking = run_rank(config);
      const auto found = centralities_in_topk(ranking, config.k);
      std::cout << "ranked " << ranking.features.size() << " features; graph features in top "
                << config.k << ":";
      for (const auto& f : found) std::cout << ' ' << f;
      std::cout << '\n';
    } else if (eval_cmd->parsed()) {
      const auto e = run_evaluate(config);
      print_report("baseline", e.baseline);
      print_report("enriched", e.enriched);
      std::cout << "accuracy_delta=" << format_fixed6(e.comparison.accuracy_delta)
                << " non_degradation=" << (e.comparison.pass ? "pass" : "fail") << '\n';
    } else if (hist_cmd->parsed()) {
      const auto h = run_histogram(config);
      write_histogram(h, std::cout);
    } else if (export_cmd->parsed()) {
      run_export(config);
      std::cout << "exports written to " << config.out_dir.string() << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_pipeline;
  }
  return 0;
}
