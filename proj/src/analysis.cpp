#include "nkteam/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <stdexcept>

namespace nkteam::analysis {

Dataset::Dataset(std::vector<FeatureSpec> schema) : schema_(std::move(schema)) {
  if (schema_.empty()) throw std::invalid_argument("dataset needs at least one feature");
  for (const FeatureSpec& spec : schema_) {
    if (spec.kind == FeatureKind::kCategorical && spec.levels.size() > 64) {
      throw std::invalid_argument("categorical feature '" + spec.name + "' has > 64 levels");
    }
  }
  columns_.resize(schema_.size());
}

void Dataset::reserve(std::size_t rows) {
  for (auto& column : columns_) column.reserve(rows);
  targets_.reserve(rows);
}

void Dataset::add_row(std::span<const double> features, double target) {
  if (features.size() != schema_.size()) {
    throw std::invalid_argument("row width does not match the dataset schema");
  }
  for (std::size_t f = 0; f < features.size(); ++f) columns_[f].push_back(features[f]);
  targets_.push_back(target);
}

int Dataset::feature_index(std::string_view name) const {
  for (std::size_t f = 0; f < schema_.size(); ++f) {
    if (schema_[f].name == name) return static_cast<int>(f);
  }
  throw std::invalid_argument("unknown feature: " + std::string(name));
}

Dataset Dataset::filter(int feature, double value) const {
  std::vector<std::size_t> rows;
  for (std::size_t row = 0; row < size(); ++row) {
    if (columns_[feature][row] == value) rows.push_back(row);
  }
  Dataset out(schema_);
  out.reserve(rows.size());
  for (std::size_t f = 0; f < schema_.size(); ++f) {
    for (const std::size_t row : rows) out.columns_[f].push_back(columns_[f][row]);
  }
  for (const std::size_t row : rows) out.targets_.push_back(targets_[row]);
  return out;
}

std::vector<double> Dataset::distinct_values(int feature) const {
  std::vector<double> values = columns_[feature];
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

std::string Dataset::level_name(int feature, double value) const {
  const FeatureSpec& spec = schema_[feature];
  if (spec.kind == FeatureKind::kCategorical) {
    const auto idx = static_cast<std::size_t>(value);
    if (idx < spec.levels.size()) return spec.levels[idx];
    return "?";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", value);
  return buf;
}

namespace {

struct LevelStats {
  double value = 0.0;
  long count = 0;
  double sum = 0.0;
};

struct SplitChoice {
  bool found = false;
  int feature = -1;
  bool categorical = false;
  double threshold = 0.0;
  std::uint64_t left_levels = 0;
  double score = 0.0;  // sum_l^2/n_l + sum_r^2/n_r, larger is better
};

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, TreeParams params) : data_(data), params_(params) {}

  std::vector<TreeNode> build() {
    std::vector<std::size_t> rows(data_.size());
    std::iota(rows.begin(), rows.end(), 0);
    grow(std::move(rows), 0);
    return std::move(nodes_);
  }

 private:
  int grow(std::vector<std::size_t> rows, int depth) {
    double sum = 0.0, sumsq = 0.0;
    for (const std::size_t row : rows) {
      const double y = data_.target(row);
      sum += y;
      sumsq += y * y;
    }
    const double n = static_cast<double>(rows.size());
    const double sse = sumsq - sum * sum / n;

    const int node_index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    nodes_[node_index].value = sum / n;

    const bool splittable = depth < params_.max_depth &&
                            rows.size() >= 2 * static_cast<std::size_t>(params_.min_leaf) &&
                            sse > 1e-12;
    if (!splittable) return node_index;

    const SplitChoice split = best_split(rows);
    if (!split.found) return node_index;

    std::vector<std::size_t> left_rows, right_rows;
    left_rows.reserve(rows.size());
    right_rows.reserve(rows.size());
    for (const std::size_t row : rows) {
      if (goes_left(split, data_.feature(row, split.feature))) {
        left_rows.push_back(row);
      } else {
        right_rows.push_back(row);
      }
    }
    rows.clear();
    rows.shrink_to_fit();

    nodes_[node_index].feature = split.feature;
    nodes_[node_index].categorical = split.categorical;
    nodes_[node_index].threshold = split.threshold;
    nodes_[node_index].left_levels = split.left_levels;
    const int left = grow(std::move(left_rows), depth + 1);
    nodes_[node_index].left = left;
    const int right = grow(std::move(right_rows), depth + 1);
    nodes_[node_index].right = right;
    return node_index;
  }

  static bool goes_left(const SplitChoice& split, double value) {
    if (split.categorical) {
      return (split.left_levels >> static_cast<std::uint64_t>(value)) & 1u;
    }
    return value <= split.threshold;
  }

  SplitChoice best_split(const std::vector<std::size_t>& rows) const {
    SplitChoice best;
    // A candidate must strictly beat leaving the node unsplit; on exact score
    // ties the earliest feature and threshold win.
    long count = 0;
    double sum = 0.0;
    for (const std::size_t row : rows) {
      ++count;
      sum += data_.target(row);
    }
    best.score = sum * sum / count;
    for (int f = 0; f < static_cast<int>(data_.feature_count()); ++f) {
      const std::vector<LevelStats> levels = collect_levels(rows, f);
      if (levels.size() < 2) continue;
      if (data_.spec(f).kind == FeatureKind::kCategorical) {
        scan_categorical(levels, f, best);
      } else {
        scan_numeric(levels, f, best);
      }
    }
    return best;
  }

  std::vector<LevelStats> collect_levels(const std::vector<std::size_t>& rows, int f) const {
    std::map<double, LevelStats> acc;
    for (const std::size_t row : rows) {
      LevelStats& stats = acc[data_.feature(row, f)];
      ++stats.count;
      stats.sum += data_.target(row);
    }
    std::vector<LevelStats> out;
    out.reserve(acc.size());
    for (auto& [value, stats] : acc) {
      stats.value = value;
      out.push_back(stats);
    }
    return out;
  }

  // Thresholds between adjacent observed values, scored by the variance
  // reduction surrogate sum^2/n of each side.
  void scan_numeric(const std::vector<LevelStats>& levels, int f, SplitChoice& best) const {
    long total_count = 0;
    double total_sum = 0.0;
    for (const LevelStats& l : levels) {
      total_count += l.count;
      total_sum += l.sum;
    }
    long left_count = 0;
    double left_sum = 0.0;
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
      left_count += levels[i].count;
      left_sum += levels[i].sum;
      const long right_count = total_count - left_count;
      if (left_count < params_.min_leaf || right_count < params_.min_leaf) continue;
      const double right_sum = total_sum - left_sum;
      const double score =
          left_sum * left_sum / left_count + right_sum * right_sum / right_count;
      if (score > best.score) {
        best = {true, f, false, 0.5 * (levels[i].value + levels[i + 1].value), 0, score};
      }
    }
  }

  // Exact subset search for squared error: order levels by mean target and
  // scan prefix splits of that order.
  void scan_categorical(const std::vector<LevelStats>& levels, int f, SplitChoice& best) const {
    std::vector<std::size_t> order(levels.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double mean_a = levels[a].sum / levels[a].count;
      const double mean_b = levels[b].sum / levels[b].count;
      if (mean_a != mean_b) return mean_a < mean_b;
      return levels[a].value < levels[b].value;
    });

    long total_count = 0;
    double total_sum = 0.0;
    for (const LevelStats& l : levels) {
      total_count += l.count;
      total_sum += l.sum;
    }
    long left_count = 0;
    double left_sum = 0.0;
    std::uint64_t left_mask = 0;
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
      const LevelStats& l = levels[order[i]];
      left_count += l.count;
      left_sum += l.sum;
      left_mask |= std::uint64_t{1} << static_cast<std::uint64_t>(l.value);
      const long right_count = total_count - left_count;
      if (left_count < params_.min_leaf || right_count < params_.min_leaf) continue;
      const double right_sum = total_sum - left_sum;
      const double score =
          left_sum * left_sum / left_count + right_sum * right_sum / right_count;
      if (score > best.score) {
        best = {true, f, true, 0.0, left_mask, score};
      }
    }
  }

  const Dataset& data_;
  TreeParams params_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

RegressionTree RegressionTree::fit(const Dataset& data, TreeParams params) {
  if (params.min_leaf < 1) throw std::invalid_argument("min_leaf must be >= 1");
  if (params.max_depth < 0) throw std::invalid_argument("max_depth must be >= 0");
  if (data.size() < 2 * static_cast<std::size_t>(params.min_leaf) || data.size() == 0) {
    throw std::invalid_argument("dataset must hold at least 2*min_leaf rows");
  }
  RegressionTree tree;
  tree.nodes_ = TreeBuilder(data, params).build();
  return tree;
}

RegressionTree RegressionTree::from_nodes(std::vector<TreeNode> nodes) {
  if (nodes.empty()) throw std::invalid_argument("a tree needs at least one node");
  RegressionTree tree;
  tree.nodes_ = std::move(nodes);
  return tree;
}

namespace {

template <typename GetFeature>
double descend(const std::vector<TreeNode>& nodes, GetFeature&& get) {
  int index = 0;
  for (;;) {
    const TreeNode& node = nodes[index];
    if (node.feature < 0) return node.value;
    const double value = get(node.feature);
    bool left;
    if (node.categorical) {
      // Levels outside the stored mask (including unseen ones) fall right.
      left = value >= 0.0 && value < 64.0 &&
             ((node.left_levels >> static_cast<std::uint64_t>(value)) & 1u) != 0;
    } else {
      left = value <= node.threshold;
    }
    index = left ? node.left : node.right;
  }
}

}  // namespace

double RegressionTree::predict(std::span<const double> features) const {
  for (const TreeNode& node : nodes_) {
    if (node.feature >= static_cast<int>(features.size())) {
      throw std::invalid_argument("feature vector does not match the tree's schema");
    }
  }
  return descend(nodes_, [&](int f) { return features[f]; });
}

double RegressionTree::predict_row(const Dataset& data, std::size_t row) const {
  return descend(nodes_, [&](int f) { return data.feature(row, f); });
}

double RegressionTree::predict_row_forced(const Dataset& data, std::size_t row,
                                          int forced_feature, double forced_value) const {
  return descend(nodes_, [&](int f) {
    return f == forced_feature ? forced_value : data.feature(row, f);
  });
}

int RegressionTree::depth() const {
  // Nodes are stored preorder, so children always follow parents; a reverse
  // scan resolves depths bottom-up.
  std::vector<int> height(nodes_.size(), 0);
  for (std::size_t i = nodes_.size(); i-- > 0;) {
    if (nodes_[i].feature >= 0) {
      height[i] = 1 + std::max(height[nodes_[i].left], height[nodes_[i].right]);
    }
  }
  return height.empty() ? 0 : height[0];
}

std::size_t RegressionTree::leaf_count() const {
  std::size_t leaves = 0;
  for (const TreeNode& node : nodes_) leaves += node.feature < 0;
  return leaves;
}

double RegressionTree::training_mse(const Dataset& data) const {
  double sum = 0.0;
  for (std::size_t row = 0; row < data.size(); ++row) {
    const double err = predict_row(data, row) - data.target(row);
    sum += err * err;
  }
  return sum / static_cast<double>(data.size());
}

int PDCurve::index_of(std::string_view level_name) const {
  for (std::size_t i = 0; i < level_names.size(); ++i) {
    if (level_names[i] == level_name) return static_cast<int>(i);
  }
  return -1;
}

namespace {

PDCurve curve_shell(const Dataset& data, std::string_view scope, int* feature_out) {
  const int feature = data.feature_index(scope);
  PDCurve curve;
  curve.feature = std::string(scope);
  curve.levels = data.distinct_values(feature);
  curve.level_names.reserve(curve.levels.size());
  curve.support.assign(curve.levels.size(), 0);
  for (const double level : curve.levels) {
    curve.level_names.push_back(data.level_name(feature, level));
  }
  for (std::size_t row = 0; row < data.size(); ++row) {
    const double v = data.feature(row, feature);
    const auto it = std::lower_bound(curve.levels.begin(), curve.levels.end(), v);
    ++curve.support[static_cast<std::size_t>(it - curve.levels.begin())];
  }
  *feature_out = feature;
  return curve;
}

}  // namespace

PDCurve partial_dependence(const RegressionTree& tree, const Dataset& data,
                           std::string_view scope) {
  int feature = 0;
  PDCurve curve = curve_shell(data, scope, &feature);
  curve.values.assign(curve.levels.size(), 0.0);
  const auto level_count = static_cast<int>(curve.levels.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < level_count; ++i) {
    double sum = 0.0;
    for (std::size_t row = 0; row < data.size(); ++row) {
      sum += tree.predict_row_forced(data, row, feature, curve.levels[i]);
    }
    curve.values[i] = sum / static_cast<double>(data.size());
  }
  return curve;
}

PDCurve empirical_partial_dependence(const Dataset& data, std::string_view scope) {
  int feature = 0;
  PDCurve curve = curve_shell(data, scope, &feature);
  curve.values.assign(curve.levels.size(), 0.0);
  for (std::size_t row = 0; row < data.size(); ++row) {
    const double v = data.feature(row, feature);
    const auto it = std::lower_bound(curve.levels.begin(), curve.levels.end(), v);
    curve.values[static_cast<std::size_t>(it - curve.levels.begin())] += data.target(row);
  }
  for (std::size_t i = 0; i < curve.values.size(); ++i) {
    if (curve.support[i] > 0) curve.values[i] /= static_cast<double>(curve.support[i]);
  }
  return curve;
}

}  // namespace nkteam::analysis
