#pragma once

// NSL-KDD record parsing and the enriched CSV schema.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "graphkdd/error.hpp"

namespace graphkdd {

enum class ColumnKind { numeric, categorical, label, difficulty };

struct Column {
  std::string name;
  ColumnKind kind;
};

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

inline bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t'; });
}

inline std::optional<double> parse_double(std::string_view token) {
  double value = 0.0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last || !std::isfinite(value)) return std::nullopt;
  return value;
}

inline std::optional<long> parse_long(std::string_view token) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) return std::nullopt;
  return value;
}

}  // namespace detail

/// Renders a real with exactly six decimals ("C" locale formatting).
inline std::string format_fixed6(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  std::string s(buf);
  if (s == "-0.000000") s.erase(0, 1);
  return s;
}

/// Ordered column layout of an input file.
class DatasetSchema {
 public:
  explicit DatasetSchema(std::vector<Column> columns) : columns_(std::move(columns)) {
    std::set<std::string> seen;
    int labels = 0;
    int difficulties = 0;
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      const auto& c = columns_[i];
      if (c.name.empty() || !seen.insert(c.name).second)
        throw Error(ErrorCode::SchemaMismatch, "duplicate or empty column name '" + c.name + "'");
      if (c.kind == ColumnKind::label) {
        ++labels;
        label_pos_ = i;
      } else if (c.kind == ColumnKind::difficulty) {
        ++difficulties;
        difficulty_pos_ = i;
      } else {
        feature_pos_.push_back(i);
      }
    }
    if (labels != 1 || difficulties != 1)
      throw Error(ErrorCode::SchemaMismatch,
                  "schema needs exactly one label and one difficulty column");
  }

  /// The standard 41-feature NSL-KDD layout followed by class and difficulty.
  static const DatasetSchema& nsl_kdd() {
    static const DatasetSchema schema = [] {
      using K = ColumnKind;
      constexpr std::array<std::string_view, 41> names = {
          "duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes", "land",
          "wrong_fragment", "urgent", "hot", "num_failed_logins", "logged_in",
          "num_compromised", "root_shell", "su_attempted", "num_root", "num_file_creations",
          "num_shells", "num_access_files", "num_outbound_cmds", "is_host_login",
          "is_guest_login", "count", "srv_count", "serror_rate", "srv_serror_rate",
          "rerror_rate", "srv_rerror_rate", "same_srv_rate", "diff_srv_rate",
          "srv_diff_host_rate", "dst_host_count", "dst_host_srv_count",
          "dst_host_same_srv_rate", "dst_host_diff_srv_rate", "dst_host_same_src_port_rate",
          "dst_host_srv_diff_host_rate", "dst_host_serror_rate", "dst_host_srv_serror_rate",
          "dst_host_rerror_rate", "dst_host_srv_rerror_rate"};
      std::vector<Column> cols;
      for (auto n : names) {
        const bool categorical = n == "protocol_type" || n == "service" || n == "flag";
        cols.push_back({std::string(n), categorical ? K::categorical : K::numeric});
      }
      cols.push_back({"class", K::label});
      cols.push_back({"difficulty", K::difficulty});
      return DatasetSchema(std::move(cols));
    }();
    return schema;
  }

  /// Reads an override schema: one `name,kind` line per column, kind in
  /// {numeric, categorical, label, difficulty}. Blank lines and `#` comments skipped.
  static DatasetSchema parse(std::istream& in) {
    std::vector<Column> cols;
    std::string line;
    while (std::getline(in, line)) {
      std::string_view view = detail::strip_cr(line);
      if (detail::is_blank(view) || view.front() == '#') continue;
      const auto parts = detail::split_commas(view);
      if (parts.size() != 2)
        throw Error(ErrorCode::SchemaMismatch, "schema line must be 'name,kind': " + line);
      ColumnKind kind;
      if (parts[1] == "numeric") kind = ColumnKind::numeric;
      else if (parts[1] == "categorical") kind = ColumnKind::categorical;
      else if (parts[1] == "label") kind = ColumnKind::label;
      else if (parts[1] == "difficulty") kind = ColumnKind::difficulty;
      else throw Error(ErrorCode::SchemaMismatch, "unknown column kind '" + std::string(parts[1]) + "'");
      cols.push_back({std::string(parts[0]), kind});
    }
    return DatasetSchema(std::move(cols));
  }

  const std::vector<Column>& columns() const noexcept { return columns_; }
  std::size_t column_count() const noexcept { return columns_.size(); }
  std::size_t feature_count() const noexcept { return feature_pos_.size(); }
  std::size_t label_position() const noexcept { return label_pos_; }
  std::size_t difficulty_position() const noexcept { return difficulty_pos_; }

  /// Position of the i-th feature within the raw row.
  std::size_t feature_position(std::size_t i) const { return feature_pos_.at(i); }
  const Column& feature(std::size_t i) const { return columns_[feature_pos_.at(i)]; }

  std::optional<std::size_t> feature_index(std::string_view name) const {
    for (std::size_t i = 0; i < feature_pos_.size(); ++i)
      if (columns_[feature_pos_[i]].name == name) return i;
    return std::nullopt;
  }

  std::vector<std::string> feature_names() const {
    std::vector<std::string> out;
    for (auto p : feature_pos_) out.push_back(columns_[p].name);
    return out;
  }

 private:
  std::vector<Column> columns_;
  std::vector<std::size_t> feature_pos_;
  std::size_t label_pos_ = 0;
  std::size_t difficulty_pos_ = 0;
};

/// One input row. Feature text is kept verbatim so serialization is lossless.
struct FlowRecord {
  std::vector<std::string> features;  // schema feature order
  std::vector<double> values;         // parsed numerics; NaN for categorical features
  std::string class_label;
  int difficulty = 0;

  bool operator==(const FlowRecord& o) const {
    return features == o.features && class_label == o.class_label &&
           difficulty == o.difficulty;
  }
};

enum class BinaryLabel { normal, attack };

inline BinaryLabel binarize_label(std::string_view class_label) {
  return class_label == "normal" ? BinaryLabel::normal : BinaryLabel::attack;
}
inline BinaryLabel binarize_label(const FlowRecord& record) {
  return binarize_label(record.class_label);
}

inline constexpr std::string_view to_string(BinaryLabel label) {
  return label == BinaryLabel::normal ? "normal" : "attack";
}

namespace detail {

inline FlowRecord parse_row(const std::vector<std::string_view>& tokens,
                            const DatasetSchema& schema, std::size_t row) {
  const auto where = [&](std::size_t col) {
    return "row " + std::to_string(row) + ", column " + std::to_string(col + 1) + " (" +
           schema.columns()[col].name + ")";
  };
  FlowRecord rec;
  rec.features.reserve(schema.feature_count());
  rec.values.reserve(schema.feature_count());
  for (std::size_t i = 0; i < schema.feature_count(); ++i) {
    const auto pos = schema.feature_position(i);
    const auto& col = schema.columns()[pos];
    const std::string_view tok = tokens[pos];
    rec.features.emplace_back(tok);
    if (col.kind == ColumnKind::numeric) {
      const auto v = parse_double(tok);
      if (!v)
        throw Error(ErrorCode::NumericParseError,
                    where(pos) + ": non-numeric token '" + std::string(tok) + "'");
      if (*v < 0 && (col.name == "duration" || col.name == "src_bytes" || col.name == "dst_bytes"))
        throw Error(ErrorCode::InvalidValue, where(pos) + ": must be >= 0");
      rec.values.push_back(*v);
    } else {
      if (col.name == "protocol_type" && tok != "tcp" && tok != "udp" && tok != "icmp")
        throw Error(ErrorCode::InvalidValue,
                    where(pos) + ": protocol_type '" + std::string(tok) + "' not in {tcp, udp, icmp}");
      rec.values.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  rec.class_label = std::string(tokens[schema.label_position()]);
  const auto diff = parse_long(tokens[schema.difficulty_position()]);
  if (!diff)
    throw Error(ErrorCode::NumericParseError,
                where(schema.difficulty_position()) + ": difficulty must be an integer");
  if (*diff < 0 || *diff > 21)
    throw Error(ErrorCode::InvalidValue, where(schema.difficulty_position()) + ": difficulty outside 0..21");
  rec.difficulty = static_cast<int>(*diff);
  return rec;
}

inline void write_raw_row(const FlowRecord& rec, const DatasetSchema& schema, std::ostream& out) {
  std::size_t f = 0;
  for (std::size_t c = 0; c < schema.column_count(); ++c) {
    if (c) out << ',';
    if (c == schema.label_position()) out << rec.class_label;
    else if (c == schema.difficulty_position()) out << rec.difficulty;
    else out << rec.features[f++];
  }
}

inline void check_stream(const std::ostream& out) {
  if (!out) throw Error(ErrorCode::IoError, "write failed");
}

}  // namespace detail

/// Parses headerless comma-separated NSL-KDD text. Blank lines are skipped;
/// `limit` keeps only the first N records.
inline std::vector<FlowRecord> parse_dataset(std::istream& in, const DatasetSchema& schema,
                                             std::optional<std::size_t> limit = std::nullopt) {
  std::vector<FlowRecord> records;
  std::string line;
  std::size_t row = 0;
  while ((!limit || records.size() < *limit) && std::getline(in, line)) {
    ++row;
    const std::string_view view = detail::strip_cr(line);
    if (detail::is_blank(view)) continue;
    const auto tokens = detail::split_commas(view);
    if (tokens.size() != schema.column_count())
      throw Error(ErrorCode::ColumnCountMismatch,
                  "row " + std::to_string(row) + " has " + std::to_string(tokens.size()) +
                      " fields, expected " + std::to_string(schema.column_count()));
    records.push_back(detail::parse_row(tokens, schema, row));
  }
  return records;
}

/// Writes records back in the headerless input layout.
inline void write_records(const std::vector<FlowRecord>& records, const DatasetSchema& schema,
                          std::ostream& out) {
  for (const auto& rec : records) {
    if (rec.features.size() != schema.feature_count())
      throw Error(ErrorCode::SchemaMismatch, "record width does not match schema");
    detail::write_raw_row(rec, schema, out);
    out << '\n';
  }
  detail::check_stream(out);
}

// ---------------------------------------------------------------------------
// Enriched output schema

inline constexpr std::array<std::string_view, 16> ENRICHED_COLUMNS = {
    "src_ip",
    "dst_ip",
    "src_degree_centrality",
    "src_in_degree_centrality",
    "src_out_degree_centrality",
    "src_betweenness",
    "src_closeness",
    "src_pagerank",
    "src_community",
    "dst_degree_centrality",
    "dst_in_degree_centrality",
    "dst_out_degree_centrality",
    "dst_betweenness",
    "dst_closeness",
    "dst_pagerank",
    "dst_community",
};

/// Graph metrics of one endpoint, as appended to a record.
struct EndpointFeatures {
  double degree_centrality = 0;
  double in_degree_centrality = 0;
  double out_degree_centrality = 0;
  double betweenness = 0;
  double closeness = 0;
  double pagerank = 0;
  int community = 0;

  /// The six real-valued metrics followed by the community id, in column order.
  std::array<double, 7> as_array() const {
    return {degree_centrality, in_degree_centrality, out_degree_centrality, betweenness,
            closeness, pagerank, static_cast<double>(community)};
  }
};

struct EnrichedRecord {
  FlowRecord record;
  std::string src_ip;
  std::string dst_ip;
  EndpointFeatures src;
  EndpointFeatures dst;
};

namespace detail {

inline void write_endpoint(const EndpointFeatures& e, std::ostream& out) {
  out << ',' << format_fixed6(e.degree_centrality) << ',' << format_fixed6(e.in_degree_centrality)
      << ',' << format_fixed6(e.out_degree_centrality) << ',' << format_fixed6(e.betweenness)
      << ',' << format_fixed6(e.closeness) << ',' << format_fixed6(e.pagerank) << ','
      << e.community;
}

inline EndpointFeatures read_endpoint(const std::vector<std::string_view>& tokens,
                                      std::size_t first, std::size_t row) {
  std::array<double, 6> v{};
  for (std::size_t i = 0; i < 6; ++i) {
    const auto d = parse_double(tokens[first + i]);
    if (!d)
      throw Error(ErrorCode::NumericParseError,
                  "row " + std::to_string(row) + ": bad enrichment value '" +
                      std::string(tokens[first + i]) + "'");
    v[i] = *d;
  }
  const auto community = parse_long(tokens[first + 6]);
  if (!community || *community < 0)
    throw Error(ErrorCode::NumericParseError,
                "row " + std::to_string(row) + ": bad community id");
  return {v[0], v[1], v[2], v[3], v[4], v[5], static_cast<int>(*community)};
}

}  // namespace detail

/// Header row then one line per record; 43 original + 16 enrichment columns.
inline void write_enriched(const std::vector<EnrichedRecord>& records, const DatasetSchema& schema,
                           std::ostream& out) {
  for (const auto& r : records)
    if (r.record.features.size() != schema.feature_count())
      throw Error(ErrorCode::SchemaMismatch, "enriched record width does not match schema");
  bool first = true;
  for (const auto& c : schema.columns()) {
    out << (first ? "" : ",") << c.name;
    first = false;
  }
  for (auto name : ENRICHED_COLUMNS) out << ',' << name;
  out << '\n';
  for (const auto& r : records) {
    detail::write_raw_row(r.record, schema, out);
    out << ',' << r.src_ip << ',' << r.dst_ip;
    detail::write_endpoint(r.src, out);
    detail::write_endpoint(r.dst, out);
    out << '\n';
  }
  detail::check_stream(out);
}

/// Reads a file produced by write_enriched.
inline std::vector<EnrichedRecord> read_enriched(std::istream& in, const DatasetSchema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::SchemaMismatch, "enriched file has no header");
  const auto header = detail::split_commas(detail::strip_cr(line));
  const std::size_t base = schema.column_count();
  bool ok = header.size() == base + ENRICHED_COLUMNS.size();
  for (std::size_t i = 0; ok && i < base; ++i) ok = header[i] == schema.columns()[i].name;
  for (std::size_t i = 0; ok && i < ENRICHED_COLUMNS.size(); ++i)
    ok = header[base + i] == ENRICHED_COLUMNS[i];
  if (!ok) throw Error(ErrorCode::SchemaMismatch, "enriched header does not match schema");

  std::vector<EnrichedRecord> out;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    const std::string_view view = detail::strip_cr(line);
    if (detail::is_blank(view)) continue;
    const auto tokens = detail::split_commas(view);
    if (tokens.size() != header.size())
      throw Error(ErrorCode::ColumnCountMismatch,
                  "row " + std::to_string(row) + " has " + std::to_string(tokens.size()) +
                      " fields, expected " + std::to_string(header.size()));
    EnrichedRecord rec;
    rec.record = detail::parse_row(tokens, schema, row);
    rec.src_ip = std::string(tokens[base]);
    rec.dst_ip = std::string(tokens[base + 1]);
    rec.src = detail::read_endpoint(tokens, base + 2, row);
    rec.dst = detail::read_endpoint(tokens, base + 9, row);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace graphkdd
