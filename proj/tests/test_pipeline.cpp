#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sys/wait.h>

#include "graphkdd/pipeline.hpp"
#include "graphkdd/sample_data.hpp"

using namespace graphkdd;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("graphkdd_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

PipelineConfig sample_config(const std::string& name, std::size_t rows = 5000) {
  const auto dir = scratch(name);
  PipelineConfig c;
  c.input = dir / "train.txt";
  c.out_dir = dir / "out";
  write_file(c.input, generate_nslkdd_sample(rows, 7));
  return c;
}

int run_cli(const std::string& args, const fs::path& log) {
  const auto cmd = std::string(GRAPHKDD_CLI) + " " + args + " >" + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Pipeline, EnrichWritesEveryArtifact) {
  auto c = sample_config("artifacts");
  const auto s = run_enrich(c);
  EXPECT_EQ(s.records, 5000u);
  for (const std::string& name : std::vector<std::string>
       {artifact::enriched, artifact::pseudonyms, artifact::edge_pool, artifact::node_metrics,
        artifact::partition, artifact::histogram, artifact::manifest, artifact::graph(c.format),
        artifact::communities(c.format), artifact::bipartite(c.format)}) {
    ASSERT_TRUE(fs::exists(c.out_dir / name)) << name;
    EXPECT_GT(fs::file_size(c.out_dir / name), 0u) << name;
  }
  EXPECT_TRUE(verify_manifest(c.out_dir).empty());

  const auto ranking = run_rank(c);
  EXPECT_EQ(ranking.features.size(), 55u);
  const auto exp = run_evaluate(c);
  EXPECT_EQ(exp.baseline.total(), exp.enriched.total());
  EXPECT_TRUE(verify_manifest(c.out_dir).empty());

  write_file(c.out_dir / artifact::ranking, "tampered\n");
  EXPECT_EQ(verify_manifest(c.out_dir), std::vector<std::string>{artifact::ranking});
}

TEST(Pipeline, RerunIsByteIdentical) {
  auto c = sample_config("rerun", 1500);
  run_enrich(c);
  const auto first = read_file(c.out_dir / artifact::manifest);
  const auto csv = read_file(c.out_dir / artifact::enriched);
  run_enrich(c);
  EXPECT_EQ(read_file(c.out_dir / artifact::manifest), first);
  EXPECT_EQ(read_file(c.out_dir / artifact::enriched), csv);
}

TEST(Pipeline, ThreadCountDoesNotChangeOutput) {
  auto c = sample_config("threads", 1500);
  run_enrich(c);
  const auto one = read_file(c.out_dir / artifact::manifest);
  c.threads = 4;
  run_enrich(c);
  EXPECT_EQ(read_file(c.out_dir / artifact::manifest), one);
}

TEST(Pipeline, EvaluateBeforeEnrichFails) {
  auto c = sample_config("missing", 10);
  try {
    run_evaluate(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingArtifact);
    EXPECT_NE(std::string(e.what()).find("enrich"), std::string::npos);
  }
}

TEST(Pipeline, SingleBinHistogram) {
  auto c = sample_config("onebin", 500);
  run_enrich(c);
  c.bins = 1;
  const auto h = run_histogram(c);
  ASSERT_EQ(h.counts.size(), 1u);
  EXPECT_EQ(h.counts[0], c.nodes);
}

TEST(Pipeline, ExportRebuildsSameGraph) {
  auto c = sample_config("export", 800);
  run_enrich(c);
  const auto dot = read_file(c.out_dir / artifact::graph(ExportFormat::dot));
  fs::remove(c.out_dir / artifact::graph(ExportFormat::dot));
  run_export(c);
  EXPECT_EQ(read_file(c.out_dir / artifact::graph(ExportFormat::dot)), dot);
  c.format = ExportFormat::graphml;
  run_export(c);
  EXPECT_TRUE(fs::exists(c.out_dir / "graph.graphml"));
}

TEST(Cli, MissingInputExitsTwo) {
  const auto dir = scratch("cli_missing");
  const auto log = dir / "log.txt";
  EXPECT_EQ(run_cli("enrich --input " + (dir / "nope.txt").string() + " --out-dir " + dir.string(), log), 2);
  EXPECT_NE(read_file(log).find("nope.txt"), std::string::npos);
}

TEST(Cli, BadFlagValuesExitTwo) {
  const auto dir = scratch("cli_flags");
  const auto log = dir / "log.txt";
  EXPECT_EQ(run_cli("export --out-dir " + dir.string() + " --format svg", log), 2);
  EXPECT_EQ(run_cli("enrich --input x --edge-prob 1.5", log), 2);
}

TEST(Cli, SampleThenEnrichSucceeds) {
  const auto dir = scratch("cli_ok");
  const auto log = dir / "log.txt";
  const auto input = (dir / "s.txt").string();
  ASSERT_EQ(run_cli("sample --rows 300 --output " + input, log), 0);
  ASSERT_EQ(run_cli("enrich --input " + input + " --out-dir " + (dir / "out").string(), log), 0)
      << read_file(log);
  EXPECT_EQ(run_cli("rank --out-dir " + (dir / "out").string(), log), 0) << read_file(log);
}
