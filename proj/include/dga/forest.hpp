#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dga {

inline constexpr int kForestSchemaVersion = 1;

/// Dense row-major matrix of feature values.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    explicit FeatureMatrix(std::size_t cols) : cols_(cols) {}

    void add_row(std::span<const double> row);
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::size_t rows() const { return cols_ == 0 ? 0 : data_.size() / cols_; }
    std::size_t cols() const { return cols_; }
    void reserve(std::size_t rows) { data_.reserve(rows * cols_); }

    FeatureMatrix select(std::span<const std::size_t> rows) const;

private:
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct ForestParams {
    int n_trees = 100;
    std::optional<int> max_depth;           // unlimited when empty
    std::optional<int> features_per_split;  // floor(sqrt(n_features)) when empty
    int min_samples_split = 2;
    bool bootstrap = true;
    std::uint64_t rng_seed = 0;

    /// Throws Error{InvalidSpec}.
    void validate() const;
    int resolved_features_per_split(std::size_t n_features) const;
};

/// A CART tree stored as parallel node arrays. Leaves have feature == -1 and
/// own a row of (bootstrap-weighted) class counts; internal nodes send
/// x[feature] <= threshold to `left`.
struct DecisionTree {
    std::vector<int> feature;
    std::vector<double> threshold;
    std::vector<int> left;
    std::vector<int> right;
    std::vector<int> leaf;             // row into leaf_counts, -1 for internal nodes
    std::vector<double> leaf_counts;   // n_leaves x n_classes
    std::size_t n_classes = 0;

    std::size_t node_count() const { return feature.size(); }
    std::size_t leaf_count() const { return n_classes == 0 ? 0 : leaf_counts.size() / n_classes; }
    /// Index of the leaf node x falls into.
    int apply(std::span<const double> x) const;
    std::span<const double> leaf_distribution_counts(int node) const;
    std::size_t depth() const;
};

struct Prediction {
    std::size_t class_index = 0;
    std::string label;
    std::vector<double> probabilities;  // in class_labels order
};

class Forest {
public:
    Forest() = default;
    Forest(std::vector<DecisionTree> trees, ForestParams params, std::vector<std::string> feature_names,
           std::vector<std::string> class_labels, std::vector<double> importances);

    const std::vector<DecisionTree>& trees() const { return trees_; }
    const ForestParams& params() const { return params_; }
    const std::vector<std::string>& feature_names() const { return feature_names_; }
    const std::vector<std::string>& class_labels() const { return class_labels_; }
    /// Mean decrease in impurity per feature, summing to 1 (all zero only when
    /// no tree ever split).
    const std::vector<double>& importances() const { return importances_; }

    /// Mean of the per-tree leaf class frequencies. Throws Error{ShapeMismatch}.
    std::vector<double> predict_proba(std::span<const double> x) const;
    /// Argmax of predict_proba; ties go to the earlier class label.
    Prediction predict(std::span<const double> x) const;

private:
    std::vector<DecisionTree> trees_;
    ForestParams params_;
    std::vector<std::string> feature_names_;
    std::vector<std::string> class_labels_;
    std::vector<double> importances_;
};

/// Grows one tree on the rows with positive weight. Weights are integer
/// bootstrap multiplicities. `importance` (size = n_features) receives the
/// weighted impurity decrease of every split.
DecisionTree grow_tree(const FeatureMatrix& x, std::span<const int> y, std::size_t n_classes,
                       std::span<const double> weights, const ForestParams& params,
                       std::uint64_t tree_seed, std::vector<double>& importance);

/// y holds class indices into class_labels. Tree t draws its bootstrap and
/// feature subsets from a stream derived from (params.rng_seed, t).
/// Throws Error{ShapeMismatch} and Error{DegenerateData}.
Forest train_forest(const FeatureMatrix& x, std::span<const int> y, std::vector<std::string> class_labels,
                    std::vector<std::string> feature_names, const ForestParams& params);

/// Convenience overload: class labels are the sorted distinct values of y.
Forest train_forest(const FeatureMatrix& x, std::span<const std::string> y,
                    std::vector<std::string> feature_names, const ForestParams& params);

/// Importances scaled to percentages, in feature order.
std::vector<std::pair<std::string, double>> feature_importance(const Forest& forest);

std::string serialize_model(const Forest& forest);
/// Throws Error{SchemaVersionMismatch} and Error{CorruptDocument}.
Forest deserialize_model(std::string_view document);

}  // namespace dga
