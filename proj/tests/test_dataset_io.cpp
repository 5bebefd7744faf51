#include <gtest/gtest.h>

#include <sstream>

#include "graphkdd/dataset_io.hpp"
#include "graphkdd/sample_data.hpp"
#include "test_support.hpp"

using namespace graphkdd;
using test_support::make_row;

namespace {

std::vector<FlowRecord> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_dataset(in, DatasetSchema::nsl_kdd());
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

}  // namespace

TEST(Schema, DefaultLayoutHas41FeaturesPlusLabelAndDifficulty) {
  const auto& s = DatasetSchema::nsl_kdd();
  EXPECT_EQ(s.column_count(), 43u);
  EXPECT_EQ(s.feature_count(), 41u);
  EXPECT_EQ(s.columns()[41].name, "class");
  EXPECT_EQ(s.columns()[42].name, "difficulty");
  EXPECT_EQ(s.feature(1).kind, ColumnKind::categorical);
  EXPECT_EQ(s.feature(4).name, "src_bytes");
}

TEST(Schema, RejectsDuplicateNamesAndMissingLabel) {
  EXPECT_EQ(code_of([] {
              DatasetSchema({{"a", ColumnKind::numeric}, {"a", ColumnKind::label},
                             {"d", ColumnKind::difficulty}});
            }),
            ErrorCode::SchemaMismatch);
  EXPECT_EQ(code_of([] { DatasetSchema({{"a", ColumnKind::numeric}, {"d", ColumnKind::difficulty}}); }),
            ErrorCode::SchemaMismatch);
}

TEST(Schema, OverrideFileParses) {
  std::istringstream in("# custom\nbytes,numeric\nproto,categorical\n\nlabel,label\nlevel,difficulty\n");
  const auto s = DatasetSchema::parse(in);
  EXPECT_EQ(s.feature_count(), 2u);
  std::istringstream rows("12,tcp,normal,3\n");
  const auto recs = parse_dataset(rows, s);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_DOUBLE_EQ(recs[0].values[0], 12.0);
  EXPECT_EQ(recs[0].features[1], "tcp");
  EXPECT_EQ(recs[0].difficulty, 3);
}

TEST(ParseDataset, EmptyStreamGivesNoRecords) { EXPECT_TRUE(parse("").empty()); }

TEST(ParseDataset, HandWrittenRowRoundTripsFieldByField) {
  const auto recs = parse(make_row("tcp", "http", 491, "normal", 20) + "\n");
  ASSERT_EQ(recs.size(), 1u);
  const auto& r = recs[0];
  EXPECT_EQ(r.features[1], "tcp");
  EXPECT_EQ(r.features[2], "http");
  EXPECT_EQ(r.features[3], "SF");
  EXPECT_DOUBLE_EQ(r.values[4], 491.0);
  EXPECT_DOUBLE_EQ(r.values[24], 0.5);
  EXPECT_TRUE(std::isnan(r.values[1]));
  EXPECT_EQ(r.class_label, "normal");
  EXPECT_EQ(r.difficulty, 20);
}

TEST(ParseDataset, WrongColumnCountReportsRow) {
  auto row = make_row();
  row = row.substr(0, row.rfind(','));  // 42 columns
  try {
    parse(row + "\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ColumnCountMismatch);
    EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos);
  }
}

TEST(ParseDataset, NonNumericTokenReportsRowAndColumn) {
  auto row = make_row();
  row.replace(row.find("491"), 3, "4x1");
  try {
    parse(make_row() + "\n" + row + "\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NumericParseError);
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("src_bytes"), std::string::npos);
  }
}

TEST(ParseDataset, EnforcesValueInvariants) {
  EXPECT_EQ(code_of([] { parse(make_row("sctp")); }), ErrorCode::InvalidValue);
  EXPECT_EQ(code_of([] { parse(make_row("tcp", "http", -5)); }), ErrorCode::InvalidValue);
  EXPECT_EQ(code_of([] { parse(make_row("tcp", "http", 1, "normal", 22)); }), ErrorCode::InvalidValue);
}

TEST(ParseDataset, AcceptsCrlfAndSkipsBlankLines) {
  const auto recs = parse(make_row() + "\r\n\r\n" + make_row("udp") + "\r\n");
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[1].features[1], "udp");
  EXPECT_EQ(recs[1].difficulty, 20);
}

TEST(ParseDataset, LimitTruncatesToFirstRecords) {
  std::istringstream in(make_row("tcp") + "\n" + make_row("udp") + "\n" + make_row("icmp") + "\n");
  const auto recs = parse_dataset(in, DatasetSchema::nsl_kdd(), 2);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[1].features[1], "udp");
}

TEST(ParseDataset, RoundTripIsByteIdenticalOnSample) {
  const auto text = generate_nslkdd_sample(500, 3);
  const auto recs = parse(text);
  EXPECT_EQ(recs.size(), 500u);
  std::ostringstream out;
  write_records(recs, DatasetSchema::nsl_kdd(), out);
  EXPECT_EQ(out.str(), text);
}

TEST(BinarizeLabel, CaseSensitiveNormalOnly) {
  EXPECT_EQ(binarize_label("normal"), BinaryLabel::normal);
  EXPECT_EQ(binarize_label("neptune"), BinaryLabel::attack);
  EXPECT_EQ(binarize_label("NORMAL"), BinaryLabel::attack);
}

TEST(FormatFixed6, SixDecimalsNoNegativeZero) {
  EXPECT_EQ(format_fixed6(0.5), "0.500000");
  EXPECT_EQ(format_fixed6(-0.0), "0.000000");
  EXPECT_EQ(format_fixed6(1.0 / 3.0), "0.333333");
}

namespace {

EnrichedRecord enriched_from(const FlowRecord& r) {
  EnrichedRecord e{r, "198.18.0.1", "198.18.0.2", {}, {}};
  e.src.out_degree_centrality = 1.0;
  e.src.pagerank = 0.25;
  e.dst.in_degree_centrality = 1.0;
  e.dst.community = 3;
  return e;
}

std::size_t count_fields(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

}  // namespace

TEST(WriteEnriched, EmptyListIsHeaderOnly) {
  std::ostringstream out;
  write_enriched({}, DatasetSchema::nsl_kdd(), out);
  const auto s = out.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 1);
  EXPECT_EQ(count_fields(s.substr(0, s.size() - 1)), 59u);
  EXPECT_NE(s.find("class,difficulty,src_ip,dst_ip,src_degree_centrality"), std::string::npos);
}

TEST(WriteEnriched, OneRecordGivesTwoLinesOf59Fields) {
  const auto recs = parse(make_row() + "\n");
  std::ostringstream out;
  write_enriched({enriched_from(recs[0])}, DatasetSchema::nsl_kdd(), out);
  std::istringstream lines(out.str());
  std::string header, row, extra;
  ASSERT_TRUE(std::getline(lines, header));
  ASSERT_TRUE(std::getline(lines, row));
  EXPECT_FALSE(std::getline(lines, extra));
  EXPECT_EQ(count_fields(header), 59u);
  EXPECT_EQ(count_fields(row), 59u);
  EXPECT_NE(row.find(",198.18.0.1,198.18.0.2,0.000000,0.000000,1.000000,"), std::string::npos);
}

TEST(WriteEnriched, MismatchedRecordWidthIsSchemaMismatch) {
  auto rec = parse(make_row() + "\n")[0];
  auto shorter = rec;
  shorter.features.pop_back();
  std::ostringstream out;
  EXPECT_EQ(code_of([&] {
              write_enriched({enriched_from(rec), enriched_from(shorter)}, DatasetSchema::nsl_kdd(), out);
            }),
            ErrorCode::SchemaMismatch);
}

TEST(WriteEnriched, ReadBackRecoversValues) {
  const auto recs = parse(generate_nslkdd_sample(20, 9));
  std::vector<EnrichedRecord> rows;
  for (const auto& r : recs) rows.push_back(enriched_from(r));
  std::ostringstream out;
  write_enriched(rows, DatasetSchema::nsl_kdd(), out);
  std::istringstream in(out.str());
  const auto back = read_enriched(in, DatasetSchema::nsl_kdd());
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].record, rows[i].record);
    EXPECT_EQ(back[i].src_ip, "198.18.0.1");
    EXPECT_DOUBLE_EQ(back[i].src.pagerank, 0.25);
    EXPECT_EQ(back[i].dst.community, 3);
  }
}

TEST(WriteEnriched, FailedStreamIsIoError) {
  std::ostringstream out;
  out.setstate(std::ios::badbit);
  EXPECT_EQ(code_of([&] { write_enriched({}, DatasetSchema::nsl_kdd(), out); }), ErrorCode::IoError);
}
