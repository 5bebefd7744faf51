#pragma once

// Univariate feature ranking, a Gini decision tree, and baseline-vs-enriched evaluation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "graphkdd/dataset_io.hpp"
#include "graphkdd/error.hpp"
#include "graphkdd/rng.hpp"

namespace graphkdd {

// ---------------------------------------------------------------------------
// Tables

/// A feature column before encoding: numeric values or categorical text.
struct RawColumn {
  std::string name;
  bool categorical = false;
  std::vector<double> numeric;
  std::vector<std::string> text;

  std::size_t size() const { return categorical ? text.size() : numeric.size(); }
};

struct RawTable {
  std::vector<RawColumn> columns;
  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

/// Column-major numeric matrix with named columns.
struct FeatureTable {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  std::size_t width() const { return columns.size(); }

  FeatureTable select_rows(const std::vector<std::size_t>& rows) const {
    FeatureTable out;
    out.names = names;
    out.columns.resize(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out.columns[c].reserve(rows.size());
      for (auto r : rows) out.columns[c].push_back(columns[c].at(r));
    }
    return out;
  }
};

enum class FeatureSet { baseline, enriched };

inline constexpr std::string_view to_string(FeatureSet fs) {
  return fs == FeatureSet::baseline ? "baseline" : "enriched";
}

/// Schema features (difficulty and label excluded), plus for the enriched set
/// the 14 graph columns (IP identifiers excluded).
inline RawTable make_table(const std::vector<EnrichedRecord>& records, const DatasetSchema& schema,
                           FeatureSet set) {
  RawTable t;
  for (std::size_t f = 0; f < schema.feature_count(); ++f) {
    RawColumn col;
    col.name = schema.feature(f).name;
    col.categorical = schema.feature(f).kind == ColumnKind::categorical;
    for (const auto& r : records) {
      if (col.categorical) col.text.push_back(r.record.features[f]);
      else col.numeric.push_back(r.record.values[f]);
    }
    t.columns.push_back(std::move(col));
  }
  if (set == FeatureSet::enriched) {
    for (std::size_t i = 0; i < 14; ++i) {
      RawColumn col;
      col.name = std::string(ENRICHED_COLUMNS[2 + i]);
      col.numeric.reserve(records.size());
      for (const auto& r : records) {
        const auto& ep = i < 7 ? r.src : r.dst;
        col.numeric.push_back(ep.as_array()[i % 7]);
      }
      t.columns.push_back(std::move(col));
    }
  }
  return t;
}

inline std::vector<BinaryLabel> labels_of(const std::vector<EnrichedRecord>& records) {
  std::vector<BinaryLabel> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(binarize_label(r.record));
  return out;
}

/// Ordinal codes by first appearance in the fitted rows; unseen values map to
/// `unseen_code`.
class OrdinalEncoder {
 public:
  static constexpr double unseen_code = -1.0;

  void fit(const RawTable& table, const std::vector<std::size_t>& rows) {
    codes_.assign(table.columns.size(), {});
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (!table.columns[c].categorical) continue;
      auto& map = codes_[c];
      for (auto r : rows) map.emplace(table.columns[c].text.at(r), static_cast<double>(map.size()));
    }
  }

  void fit(const RawTable& table) {
    std::vector<std::size_t> all(table.rows());
    std::iota(all.begin(), all.end(), 0);
    fit(table, all);
  }

  FeatureTable transform(const RawTable& table, const std::vector<std::size_t>& rows) const {
    if (codes_.size() != table.columns.size())
      throw Error(ErrorCode::SchemaMismatch, "encoder fitted on a different table");
    FeatureTable out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      const auto& col = table.columns[c];
      out.names.push_back(col.name);
      std::vector<double> values;
      values.reserve(rows.size());
      for (auto r : rows) {
        if (!col.categorical) {
          values.push_back(col.numeric.at(r));
        } else {
          const auto it = codes_[c].find(col.text.at(r));
          values.push_back(it == codes_[c].end() ? unseen_code : it->second);
        }
      }
      out.columns.push_back(std::move(values));
    }
    return out;
  }

  FeatureTable transform(const RawTable& table) const {
    std::vector<std::size_t> all(table.rows());
    std::iota(all.begin(), all.end(), 0);
    return transform(table, all);
  }

 private:
  std::vector<std::unordered_map<std::string, double>> codes_;
};

inline FeatureTable encode(const RawTable& table) {
  OrdinalEncoder enc;
  enc.fit(table);
  return enc.transform(table);
}

// ---------------------------------------------------------------------------
// Ranking

enum class Scorer { anova, chi2 };

struct RankedFeature {
  std::string name;
  double score = 0;  // +inf marks zero within-class variance
  int rank = 0;
  bool in_top_k = false;
};

struct FeatureRanking {
  std::vector<RankedFeature> features;  // rank order
};

namespace detail {

inline void check_labels(const std::vector<BinaryLabel>& labels, std::size_t rows) {
  if (labels.size() != rows) throw Error(ErrorCode::SchemaMismatch, "label count differs from row count");
  if (rows < 2) throw Error(ErrorCode::TooFewRows, "need at least 2 rows");
  const auto attacks = std::count(labels.begin(), labels.end(), BinaryLabel::attack);
  if (attacks == 0 || attacks == static_cast<std::ptrdiff_t>(rows))
    throw Error(ErrorCode::SingleClass, "both classes must be present");
}

}  // namespace detail

/// Two-group one-way ANOVA F = (SS_between/1) / (SS_within/(N-2)).
/// Constant columns score 0; zero within-group variance with separated group
/// means scores +infinity.
inline double anova_f(const std::vector<double>& x, const std::vector<BinaryLabel>& labels) {
  double sum[2] = {0, 0};
  double lo[2] = {INFINITY, INFINITY};
  double hi[2] = {-INFINITY, -INFINITY};
  std::size_t count[2] = {0, 0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    const int g = labels[i] == BinaryLabel::attack;
    sum[g] += x[i];
    ++count[g];
    lo[g] = std::min(lo[g], x[i]);
    hi[g] = std::max(hi[g], x[i]);
  }
  if (std::min(lo[0], lo[1]) == std::max(hi[0], hi[1])) return 0.0;
  const double n = static_cast<double>(x.size());
  const double mean_all = (sum[0] + sum[1]) / n;
  const double mean[2] = {sum[0] / static_cast<double>(count[0]), sum[1] / static_cast<double>(count[1])};
  double ss_between = 0;
  for (int g = 0; g < 2; ++g)
    ss_between += static_cast<double>(count[g]) * (mean[g] - mean_all) * (mean[g] - mean_all);
  double ss_within = 0;
  if (!(lo[0] == hi[0] && lo[1] == hi[1])) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const int g = labels[i] == BinaryLabel::attack;
      ss_within += (x[i] - mean[g]) * (x[i] - mean[g]);
    }
  }
  if (ss_within == 0.0) return ss_between > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return ss_between / (ss_within / (n - 2.0));
}

/// Chi-squared statistic of per-class feature sums; requires non-negative values.
inline double chi2_score(const std::vector<double>& x, const std::vector<BinaryLabel>& labels) {
  double observed[2] = {0, 0};
  double count[2] = {0, 0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0) throw Error(ErrorCode::InvalidValue, "chi2 scoring needs non-negative features");
    const int g = labels[i] == BinaryLabel::attack;
    observed[g] += x[i];
    count[g] += 1;
  }
  const double total = observed[0] + observed[1];
  if (total == 0.0) return 0.0;
  double chi2 = 0;
  for (int g = 0; g < 2; ++g) {
    const double expected = total * count[g] / static_cast<double>(x.size());
    chi2 += (observed[g] - expected) * (observed[g] - expected) / expected;
  }
  return chi2;
}

/// Scores every column, sorts by score descending (ties by name), and flags the top k.
inline FeatureRanking rank_features(const FeatureTable& table, const std::vector<BinaryLabel>& labels,
                                    std::size_t k = 50, Scorer scorer = Scorer::anova) {
  detail::check_labels(labels, table.rows());
  FeatureRanking ranking;
  for (std::size_t c = 0; c < table.width(); ++c) {
    const double s = scorer == Scorer::anova ? anova_f(table.columns[c], labels)
                                             : chi2_score(table.columns[c], labels);
    ranking.features.push_back({table.names[c], s, 0, false});
  }
  std::sort(ranking.features.begin(), ranking.features.end(),
            [](const RankedFeature& a, const RankedFeature& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.name < b.name;
            });
  for (std::size_t i = 0; i < ranking.features.size(); ++i) {
    ranking.features[i].rank = static_cast<int>(i + 1);
    ranking.features[i].in_top_k = i < k;
  }
  return ranking;
}

/// Graph-derived columns (IPs excluded) ranked within the top k, in rank order.
inline std::vector<std::string> centralities_in_topk(const FeatureRanking& ranking, std::size_t k = 50) {
  std::vector<std::string> out;
  for (const auto& f : ranking.features) {
    if (static_cast<std::size_t>(f.rank) > k) break;
    const auto it = std::find(ENRICHED_COLUMNS.begin() + 2, ENRICHED_COLUMNS.end(), f.name);
    if (it != ENRICHED_COLUMNS.end()) out.push_back(f.name);
  }
  return out;
}

/// `rank<TAB>feature<TAB>score` lines.
inline void write_ranking(const FeatureRanking& ranking, std::ostream& out) {
  for (const auto& f : ranking.features)
    out << f.rank << '\t' << f.name << '\t' << format_fixed6(f.score) << '\n';
  detail::check_stream(out);
}

// ---------------------------------------------------------------------------
// Decision tree

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0;
  int left = -1;   // rows with value <= threshold
  int right = -1;
  BinaryLabel prediction = BinaryLabel::attack;
  std::size_t samples = 0;

  bool operator==(const TreeNode&) const = default;
};

class DecisionTree {
 public:
  DecisionTree(std::vector<std::string> feature_names, std::vector<TreeNode> nodes)
      : names_(std::move(feature_names)), nodes_(std::move(nodes)) {}

  const std::vector<std::string>& feature_names() const noexcept { return names_; }
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }

  int depth() const { return depth_from(0); }

  BinaryLabel predict(const FeatureTable& table, std::size_t row) const {
    int at = 0;
    while (nodes_[at].feature >= 0) {
      const auto& n = nodes_[at];
      at = table.columns[n.feature][row] <= n.threshold ? n.left : n.right;
    }
    return nodes_[at].prediction;
  }

  bool operator==(const DecisionTree&) const = default;

 private:
  int depth_from(int at) const {
    const auto& n = nodes_[at];
    if (n.feature < 0) return 0;
    return 1 + std::max(depth_from(n.left), depth_from(n.right));
  }

  std::vector<std::string> names_;
  std::vector<TreeNode> nodes_;
};

namespace detail {

inline double gini(double attack, double total) {
  if (total == 0) return 0;
  const double p = attack / total;
  return 2.0 * p * (1.0 - p);
}

struct TreeBuilder {
  const FeatureTable& table;
  const std::vector<BinaryLabel>& labels;
  int max_depth;
  std::vector<TreeNode> nodes;

  int build(std::vector<std::size_t> rows, int depth) {
    const auto index = static_cast<int>(nodes.size());
    nodes.emplace_back();
    std::size_t attacks = 0;
    for (auto r : rows) attacks += labels[r] == BinaryLabel::attack;
    const std::size_t total = rows.size();
    nodes[index].samples = total;
    nodes[index].prediction = 2 * attacks >= total ? BinaryLabel::attack : BinaryLabel::normal;
    if (depth >= max_depth || attacks == 0 || attacks == total || total < 2) return index;

    const double parent = gini(static_cast<double>(attacks), static_cast<double>(total));
    double best_gain = 0.0;
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::pair<double, bool>> sorted(total);
    for (std::size_t f = 0; f < table.width(); ++f) {
      const auto& col = table.columns[f];
      for (std::size_t i = 0; i < total; ++i)
        sorted[i] = {col[rows[i]], labels[rows[i]] == BinaryLabel::attack};
      std::sort(sorted.begin(), sorted.end());
      double left_n = 0;
      double left_attack = 0;
      for (std::size_t i = 0; i + 1 < total; ++i) {
        left_n += 1;
        left_attack += sorted[i].second;
        if (sorted[i].first == sorted[i + 1].first) continue;
        const double right_n = static_cast<double>(total) - left_n;
        const double right_attack = static_cast<double>(attacks) - left_attack;
        const double child = (left_n * gini(left_attack, left_n) + right_n * gini(right_attack, right_n)) /
                             static_cast<double>(total);
        const double gain = parent - child;
        // Strict improvement keeps the lowest feature index and threshold on ties.
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          best_threshold = sorted[i].first + (sorted[i + 1].first - sorted[i].first) / 2.0;
        }
      }
    }
    if (best_feature < 0) return index;

    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    for (auto r : rows)
      (table.columns[best_feature][r] <= best_threshold ? left_rows : right_rows).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    const int l = build(std::move(left_rows), depth + 1);
    const int rt = build(std::move(right_rows), depth + 1);
    nodes[index].feature = best_feature;
    nodes[index].threshold = best_threshold;
    nodes[index].left = l;
    nodes[index].right = rt;
    return index;
  }
};

}  // namespace detail

/// Gini tree with exhaustive midpoint thresholds. Fully deterministic: split
/// ties go to the lower feature index, then the lower threshold; leaf ties
/// predict attack.
inline DecisionTree train_tree(const FeatureTable& table, const std::vector<BinaryLabel>& labels,
                               int max_depth = 8) {
  detail::check_labels(labels, table.rows());
  detail::TreeBuilder builder{table, labels, max_depth, {}};
  std::vector<std::size_t> rows(table.rows());
  std::iota(rows.begin(), rows.end(), 0);
  builder.build(std::move(rows), 0);
  return DecisionTree(table.names, std::move(builder.nodes));
}

// ---------------------------------------------------------------------------
// Evaluation

struct EvalReport {
  FeatureSet feature_set = FeatureSet::baseline;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double accuracy = 0, precision = 0, recall = 0, f1 = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
};

/// Metrics from confusion counts; attack is the positive class.
inline EvalReport report_from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn,
                                     FeatureSet set = FeatureSet::baseline) {
  EvalReport r{set, tp, fp, tn, fn};
  const auto d = [](std::size_t a, std::size_t b) {
    return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
  };
  r.accuracy = d(tp + tn, r.total());
  r.precision = d(tp, tp + fp);
  r.recall = d(tp, tp + fn);
  r.f1 = r.precision + r.recall > 0 ? 2 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

inline EvalReport evaluate(const DecisionTree& model, const FeatureTable& table,
                           const std::vector<BinaryLabel>& labels, FeatureSet set = FeatureSet::baseline) {
  if (table.names != model.feature_names())
    throw Error(ErrorCode::SchemaMismatch, "evaluation columns differ from training columns");
  if (labels.size() != table.rows())
    throw Error(ErrorCode::SchemaMismatch, "label count differs from row count");
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    const bool predicted = model.predict(table, i) == BinaryLabel::attack;
    const bool actual = labels[i] == BinaryLabel::attack;
    if (predicted && actual) ++tp;
    else if (predicted) ++fp;
    else if (actual) ++fn;
    else ++tn;
  }
  return report_from_counts(tp, fp, tn, fn, set);
}

struct Comparison {
  double accuracy_delta = 0, precision_delta = 0, recall_delta = 0, f1_delta = 0;
  double epsilon = 0.01;
  bool pass = false;
};

/// Deltas are enriched - baseline; passes when enriched accuracy >= baseline - epsilon.
inline Comparison compare(const EvalReport& baseline, const EvalReport& enriched, double epsilon = 0.01) {
  if (baseline.total() != enriched.total() || baseline.tp + baseline.fn != enriched.tp + enriched.fn)
    throw Error(ErrorCode::SplitMismatch, "reports were not computed on the same test split");
  Comparison c;
  c.accuracy_delta = enriched.accuracy - baseline.accuracy;
  c.precision_delta = enriched.precision - baseline.precision;
  c.recall_delta = enriched.recall - baseline.recall;
  c.f1_delta = enriched.f1 - baseline.f1;
  c.epsilon = epsilon;
  c.pass = enriched.accuracy >= baseline.accuracy - epsilon;
  return c;
}

inline nlohmann::ordered_json to_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["feature_set"] = std::string(to_string(r.feature_set));
  j["accuracy"] = r.accuracy;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  j["tp"] = r.tp;
  j["fp"] = r.fp;
  j["tn"] = r.tn;
  j["fn"] = r.fn;
  return j;
}

/// key=value block followed by a single-line JSON summary.
inline void write_report(const EvalReport& r, std::ostream& out) {
  out << "feature_set=" << to_string(r.feature_set) << '\n'
      << "accuracy=" << format_fixed6(r.accuracy) << '\n'
      << "precision=" << format_fixed6(r.precision) << '\n'
      << "recall=" << format_fixed6(r.recall) << '\n'
      << "f1=" << format_fixed6(r.f1) << '\n'
      << "tp=" << r.tp << "\nfp=" << r.fp << "\ntn=" << r.tn << "\nfn=" << r.fn << '\n'
      << "summary=" << to_json(r).dump() << '\n';
  detail::check_stream(out);
}

inline void write_comparison(const Comparison& c, std::ostream& out) {
  nlohmann::ordered_json j;
  j["accuracy_delta"] = c.accuracy_delta;
  j["precision_delta"] = c.precision_delta;
  j["recall_delta"] = c.recall_delta;
  j["f1_delta"] = c.f1_delta;
  j["epsilon"] = c.epsilon;
  j["pass"] = c.pass;
  out << "accuracy_delta=" << format_fixed6(c.accuracy_delta) << '\n'
      << "precision_delta=" << format_fixed6(c.precision_delta) << '\n'
      << "recall_delta=" << format_fixed6(c.recall_delta) << '\n'
      << "f1_delta=" << format_fixed6(c.f1_delta) << '\n'
      << "epsilon=" << format_fixed6(c.epsilon) << '\n'
      << "non_degradation=" << (c.pass ? "pass" : "fail") << '\n'
      << "summary=" << j.dump() << '\n';
  detail::check_stream(out);
}

// ---------------------------------------------------------------------------
// Split and experiment

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Per-class seeded shuffle; round(train_fraction * class size) rows of each
/// class go to training. Both index lists are returned sorted.
inline Split stratified_split(const std::vector<BinaryLabel>& labels, double train_fraction,
                              std::uint64_t seed) {
  Rng rng(seed);
  Split s;
  for (const auto cls : {BinaryLabel::normal, BinaryLabel::attack}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == cls) idx.push_back(i);
    rng.shuffle(idx);
    const auto n_train =
        static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(idx.size()) + 0.5));
    s.train.insert(s.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test.insert(s.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

struct Experiment {
  EvalReport baseline;
  EvalReport enriched;
  Comparison comparison;
};

/// Trains and tests one tree per feature set on the same stratified 80/20 split.
/// Categorical codes are fitted on the training rows only.
inline Experiment run_experiment(const std::vector<EnrichedRecord>& records, const DatasetSchema& schema,
                                 std::uint64_t split_seed, int max_depth = 8, double epsilon = 0.01) {
  const auto labels = labels_of(records);
  const auto split = stratified_split(labels, 0.8, split_seed);
  const auto pick = [&](const std::vector<std::size_t>& idx) {
    std::vector<BinaryLabel> out;
    for (auto i : idx) out.push_back(labels[i]);
    return out;
  };
  const auto train_labels = pick(split.train);
  const auto test_labels = pick(split.test);

  const auto run = [&](FeatureSet set) {
    const auto raw = make_table(records, schema, set);
    OrdinalEncoder enc;
    enc.fit(raw, split.train);
    const auto model = train_tree(enc.transform(raw, split.train), train_labels, max_depth);
    return evaluate(model, enc.transform(raw, split.test), test_labels, set);
  };
  Experiment e;
  e.baseline = run(FeatureSet::baseline);
  e.enriched = run(FeatureSet::enriched);
  e.comparison = compare(e.baseline, e.enriched, epsilon);
  return e;
}

}  // namespace graphkdd
