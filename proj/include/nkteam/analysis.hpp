#ifndef NKTEAM_ANALYSIS_HPP
#define NKTEAM_ANALYSIS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nkteam::analysis {

enum class FeatureKind { kNumeric, kCategorical };

struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::kNumeric;
  // Display names for categorical levels; a categorical cell stores the level
  // index. At most 64 levels (split sets are bitmasks).
  std::vector<std::string> levels;
};

// Column-major feature table with a numeric target in [0,1].
class Dataset {
 public:
  explicit Dataset(std::vector<FeatureSpec> schema);

  void reserve(std::size_t rows);
  void add_row(std::span<const double> features, double target);

  std::size_t size() const { return targets_.size(); }
  std::size_t feature_count() const { return schema_.size(); }
  const std::vector<FeatureSpec>& schema() const { return schema_; }
  const FeatureSpec& spec(int feature) const { return schema_[feature]; }
  int feature_index(std::string_view name) const;  // throws on unknown names

  double feature(std::size_t row, int f) const { return columns_[f][row]; }
  double target(std::size_t row) const { return targets_[row]; }

  // Rows whose value in `feature` equals `value` exactly (level slicing).
  Dataset filter(int feature, double value) const;
  // Distinct values of a feature, ascending.
  std::vector<double> distinct_values(int feature) const;

  std::string level_name(int feature, double value) const;

 private:
  std::vector<FeatureSpec> schema_;
  std::vector<std::vector<double>> columns_;
  std::vector<double> targets_;
};

struct TreeParams {
  int max_depth = 8;
  int min_leaf = 50;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  bool categorical = false;
  double threshold = 0.0;         // numeric: value <= threshold goes left
  std::uint64_t left_levels = 0;  // categorical: level bit set goes left
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf mean
};

// CART with variance-reduction splitting, no pruning. Categorical splits use
// the sort-by-mean subset scan, which is exact for squared error.
class RegressionTree {
 public:
  static RegressionTree fit(const Dataset& data, TreeParams params = {});
  // Assembles a tree from explicit nodes (fixtures); node 0 is the root.
  static RegressionTree from_nodes(std::vector<TreeNode> nodes);

  double predict(std::span<const double> features) const;
  double predict_row(const Dataset& data, std::size_t row) const;
  // Prediction with one feature pinned to a fixed value (partial dependence).
  double predict_row_forced(const Dataset& data, std::size_t row, int forced_feature,
                            double forced_value) const;

  int depth() const;
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t leaf_count() const;
  const std::vector<TreeNode>& nodes() const { return nodes_; }

  double training_mse(const Dataset& data) const;

 private:
  std::vector<TreeNode> nodes_;
};

struct PDCurve {
  std::string feature;
  std::vector<double> levels;            // raw values (or level indices)
  std::vector<std::string> level_names;  // display form per level
  std::vector<double> values;
  std::vector<long> support;  // rows observed at each level

  int index_of(std::string_view level_name) const;  // -1 when absent
};

// Friedman-style partial dependence: for each observed level of `scope`,
// the model prediction averaged over the dataset with the level forced in.
// Level evaluations run in parallel; results do not depend on thread count.
PDCurve partial_dependence(const RegressionTree& tree, const Dataset& data,
                           std::string_view scope);

// Model-free oracle: the per-level mean of the observed targets.
PDCurve empirical_partial_dependence(const Dataset& data, std::string_view scope);

}  // namespace nkteam::analysis

#endif  // NKTEAM_ANALYSIS_HPP
