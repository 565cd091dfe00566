#include "dga/forest.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <numeric>

#include "dga/error.hpp"
#include "dga/rng.hpp"

namespace dga {

using nlohmann::json;

void FeatureMatrix::add_row(std::span<const double> row) {
    if (row.size() != cols_) {
        throw Error(Errc::ShapeMismatch, "row has " + std::to_string(row.size()) + " values, matrix has " +
                                             std::to_string(cols_) + " columns");
    }
    data_.insert(data_.end(), row.begin(), row.end());
}

FeatureMatrix FeatureMatrix::select(std::span<const std::size_t> rows) const {
    FeatureMatrix out(cols_);
    out.reserve(rows.size());
    for (auto r : rows) out.add_row(row(r));
    return out;
}

void ForestParams::validate() const {
    if (n_trees < 1) throw Error(Errc::InvalidSpec, "n_trees must be >= 1");
    if (min_samples_split < 2) throw Error(Errc::InvalidSpec, "min_samples_split must be >= 2");
    if (max_depth && *max_depth < 0) throw Error(Errc::InvalidSpec, "max_depth must be >= 0");
    if (features_per_split && *features_per_split < 1) {
        throw Error(Errc::InvalidSpec, "features_per_split must be >= 1");
    }
}

int ForestParams::resolved_features_per_split(std::size_t n_features) const {
    const int all = static_cast<int>(n_features);
    if (features_per_split) return std::min(*features_per_split, all);
    return std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(n_features)))));
}

int DecisionTree::apply(std::span<const double> x) const {
    int node = 0;
    while (feature[static_cast<std::size_t>(node)] >= 0) {
        const auto n = static_cast<std::size_t>(node);
        node = x[static_cast<std::size_t>(feature[n])] <= threshold[n] ? left[n] : right[n];
    }
    return node;
}

std::span<const double> DecisionTree::leaf_distribution_counts(int node) const {
    const auto row = static_cast<std::size_t>(leaf[static_cast<std::size_t>(node)]);
    return {leaf_counts.data() + row * n_classes, n_classes};
}

std::size_t DecisionTree::depth() const {
    if (feature.empty()) return 0;
    std::vector<std::size_t> d(feature.size(), 0);
    std::size_t best = 0;
    // children are always created after their parent
    for (std::size_t i = 0; i < feature.size(); ++i) {
        if (feature[i] < 0) continue;
        d[static_cast<std::size_t>(left[i])] = d[i] + 1;
        d[static_cast<std::size_t>(right[i])] = d[i] + 1;
        best = std::max(best, d[i] + 1);
    }
    return best;
}

namespace {

struct Sample {
    double value;
    int cls;
    double weight;
};

struct Pending {
    int node;
    std::size_t begin;
    std::size_t end;
    int depth;
};

double sum_sq_over(std::span<const double> counts, double total) {
    if (total <= 0.0) return 0.0;
    double s = 0.0;
    for (double c : counts) s += c * c;
    return s / total;
}

}  // namespace

DecisionTree grow_tree(const FeatureMatrix& x, std::span<const int> y, std::size_t n_classes,
                       std::span<const double> weights, const ForestParams& params,
                       std::uint64_t tree_seed, std::vector<double>& importance) {
    const std::size_t nf = x.cols();
    const int mtry = params.resolved_features_per_split(nf);
    importance.assign(nf, 0.0);

    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        if (weights[i] > 0.0) idx.push_back(i);
    }

    DecisionTree tree;
    tree.n_classes = n_classes;
    auto new_node = [&tree]() {
        tree.feature.push_back(-1);
        tree.threshold.push_back(0.0);
        tree.left.push_back(-1);
        tree.right.push_back(-1);
        tree.leaf.push_back(-1);
        return static_cast<int>(tree.feature.size() - 1);
    };

    SplitMix64 rng(tree_seed);
    std::vector<double> counts(n_classes);
    std::vector<double> left_counts(n_classes);
    std::vector<double> right_counts(n_classes);
    std::vector<Sample> buf;
    std::vector<std::size_t> order(nf);

    std::vector<Pending> stack;
    stack.push_back({new_node(), 0, idx.size(), 0});
    while (!stack.empty()) {
        const Pending p = stack.back();
        stack.pop_back();

        std::fill(counts.begin(), counts.end(), 0.0);
        double total = 0.0;
        for (std::size_t i = p.begin; i < p.end; ++i) {
            counts[static_cast<std::size_t>(y[idx[i]])] += weights[idx[i]];
            total += weights[idx[i]];
        }
        const auto classes_present = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; });
        const std::size_t m = p.end - p.begin;

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_proxy = -std::numeric_limits<double>::infinity();
        const bool stop = classes_present <= 1 || m < static_cast<std::size_t>(params.min_samples_split) ||
                          (params.max_depth && p.depth >= *params.max_depth);
        if (!stop) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            int evaluated = 0;
            for (std::size_t j = 0; j < nf && evaluated < mtry; ++j) {
                std::swap(order[j], order[j + rng.uniform_below(nf - j)]);
                const std::size_t f = order[j];

                buf.clear();
                for (std::size_t i = p.begin; i < p.end; ++i) {
                    buf.push_back({x.at(idx[i], f), y[idx[i]], weights[idx[i]]});
                }
                std::sort(buf.begin(), buf.end(), [](const Sample& a, const Sample& b) { return a.value < b.value; });
                if (buf.front().value == buf.back().value) continue;  // constant here, try another
                ++evaluated;

                std::fill(left_counts.begin(), left_counts.end(), 0.0);
                double wl = 0.0;
                for (std::size_t s = 0; s + 1 < buf.size(); ++s) {
                    left_counts[static_cast<std::size_t>(buf[s].cls)] += buf[s].weight;
                    wl += buf[s].weight;
                    if (!(buf[s].value < buf[s + 1].value)) continue;
                    for (std::size_t c = 0; c < n_classes; ++c) right_counts[c] = counts[c] - left_counts[c];
                    // maximizing this is minimizing the children's weighted Gini
                    const double proxy = sum_sq_over(left_counts, wl) + sum_sq_over(right_counts, total - wl);
                    const double a = buf[s].value;
                    const double b = buf[s + 1].value;
                    double thr = a / 2.0 + b / 2.0;
                    if (!(thr >= a && thr < b)) thr = a;
                    // gains equal up to rounding count as ties
                    const double eps = 1e-12 * std::max(1.0, std::abs(best_proxy));
                    const bool better =
                        best_feature < 0 || proxy > best_proxy + eps ||
                        (proxy >= best_proxy - eps &&
                         (static_cast<int>(f) < best_feature ||
                          (static_cast<int>(f) == best_feature && thr < best_threshold)));
                    if (better) {
                        best_proxy = proxy;
                        best_feature = static_cast<int>(f);
                        best_threshold = thr;
                    }
                }
            }
        }

        if (best_feature < 0) {
            tree.leaf[static_cast<std::size_t>(p.node)] = static_cast<int>(tree.leaf_count());
            tree.leaf_counts.insert(tree.leaf_counts.end(), counts.begin(), counts.end());
            continue;
        }

        importance[static_cast<std::size_t>(best_feature)] +=
            std::max(0.0, best_proxy - sum_sq_over(counts, total));

        const auto mid_it = std::partition(idx.begin() + static_cast<std::ptrdiff_t>(p.begin),
                                           idx.begin() + static_cast<std::ptrdiff_t>(p.end),
                                           [&](std::size_t r) { return x.at(r, static_cast<std::size_t>(best_feature)) <= best_threshold; });
        const auto mid = static_cast<std::size_t>(mid_it - idx.begin());

        const int l = new_node();
        const int r = new_node();
        const auto n = static_cast<std::size_t>(p.node);
        tree.feature[n] = best_feature;
        tree.threshold[n] = best_threshold;
        tree.left[n] = l;
        tree.right[n] = r;
        stack.push_back({r, mid, p.end, p.depth + 1});
        stack.push_back({l, p.begin, mid, p.depth + 1});
    }
    return tree;
}

Forest::Forest(std::vector<DecisionTree> trees, ForestParams params, std::vector<std::string> feature_names,
               std::vector<std::string> class_labels, std::vector<double> importances)
    : trees_(std::move(trees)),
      params_(params),
      feature_names_(std::move(feature_names)),
      class_labels_(std::move(class_labels)),
      importances_(std::move(importances)) {}

std::vector<double> Forest::predict_proba(std::span<const double> x) const {
    if (x.size() != feature_names_.size()) {
        throw Error(Errc::ShapeMismatch, "expected " + std::to_string(feature_names_.size()) +
                                             " features, got " + std::to_string(x.size()));
    }
    std::vector<double> proba(class_labels_.size(), 0.0);
    for (const auto& tree : trees_) {
        const auto counts = tree.leaf_distribution_counts(tree.apply(x));
        const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
        for (std::size_t c = 0; c < proba.size(); ++c) proba[c] += counts[c] / total;
    }
    for (auto& p : proba) p /= static_cast<double>(trees_.size());
    return proba;
}

Prediction Forest::predict(std::span<const double> x) const {
    Prediction out;
    out.probabilities = predict_proba(x);
    out.class_index = static_cast<std::size_t>(
        std::max_element(out.probabilities.begin(), out.probabilities.end()) - out.probabilities.begin());
    out.label = class_labels_[out.class_index];
    return out;
}

Forest train_forest(const FeatureMatrix& x, std::span<const int> y, std::vector<std::string> class_labels,
                    std::vector<std::string> feature_names, const ForestParams& params) {
    params.validate();
    const std::size_t n = x.rows();
    if (n != y.size()) {
        throw Error(Errc::ShapeMismatch, std::to_string(n) + " rows but " + std::to_string(y.size()) + " labels");
    }
    if (feature_names.size() != x.cols()) {
        throw Error(Errc::ShapeMismatch, "feature name count differs from column count");
    }
    if (n < 2) throw Error(Errc::DegenerateData, "need at least two samples");
    const std::size_t k = class_labels.size();
    std::vector<std::size_t> per_class(k, 0);
    for (int label : y) {
        if (label < 0 || static_cast<std::size_t>(label) >= k) {
            throw Error(Errc::ShapeMismatch, "label index out of range");
        }
        ++per_class[static_cast<std::size_t>(label)];
    }
    if (std::count_if(per_class.begin(), per_class.end(), [](std::size_t c) { return c > 0; }) < 2) {
        throw Error(Errc::DegenerateData, "training data contains a single class");
    }
    for (std::size_t r = 0; r < n; ++r) {
        for (double v : x.row(r)) {
            if (std::isnan(v)) throw Error(Errc::DegenerateData, "NaN feature in row " + std::to_string(r));
        }
    }

    std::vector<DecisionTree> trees;
    trees.reserve(static_cast<std::size_t>(params.n_trees));
    std::vector<double> importances(x.cols(), 0.0);
    std::vector<double> tree_importance;
    std::vector<double> weights(n);
    for (int t = 0; t < params.n_trees; ++t) {
        const auto tu = static_cast<std::uint64_t>(t);
        if (params.bootstrap) {
            std::fill(weights.begin(), weights.end(), 0.0);
            SplitMix64 draw(derive_seed(params.rng_seed, "bootstrap", tu));
            for (std::size_t i = 0; i < n; ++i) weights[draw.uniform_below(n)] += 1.0;
        } else {
            std::fill(weights.begin(), weights.end(), 1.0);
        }
        trees.push_back(grow_tree(x, y, k, weights, params, derive_seed(params.rng_seed, "split", tu),
                                  tree_importance));
        const double sum = std::accumulate(tree_importance.begin(), tree_importance.end(), 0.0);
        if (sum > 0.0) {
            for (std::size_t f = 0; f < importances.size(); ++f) importances[f] += tree_importance[f] / sum;
        }
    }
    const double sum = std::accumulate(importances.begin(), importances.end(), 0.0);
    if (sum > 0.0) {
        for (auto& v : importances) v /= sum;
    }
    return Forest(std::move(trees), params, std::move(feature_names), std::move(class_labels),
                  std::move(importances));
}

Forest train_forest(const FeatureMatrix& x, std::span<const std::string> y,
                    std::vector<std::string> feature_names, const ForestParams& params) {
    std::vector<std::string> labels(y.begin(), y.end());
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    std::vector<int> idx;
    idx.reserve(y.size());
    for (const auto& v : y) {
        idx.push_back(static_cast<int>(std::lower_bound(labels.begin(), labels.end(), v) - labels.begin()));
    }
    return train_forest(x, idx, std::move(labels), std::move(feature_names), params);
}

std::vector<std::pair<std::string, double>> feature_importance(const Forest& forest) {
    std::vector<std::pair<std::string, double>> out;
    const auto& names = forest.feature_names();
    const auto& imp = forest.importances();
    out.reserve(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) out.emplace_back(names[i], imp[i] * 100.0);
    return out;
}

std::string serialize_model(const Forest& forest) {
    const auto& p = forest.params();
    json params;
    params["n_trees"] = p.n_trees;
    params["max_depth"] = p.max_depth ? json(*p.max_depth) : json(nullptr);
    params["features_per_split"] = p.features_per_split ? json(*p.features_per_split) : json(nullptr);
    params["min_samples_split"] = p.min_samples_split;
    params["bootstrap"] = p.bootstrap;
    params["rng_seed"] = p.rng_seed;

    json trees = json::array();
    for (const auto& t : forest.trees()) {
        json jt;
        jt["n_classes"] = t.n_classes;
        jt["feature"] = t.feature;
        jt["threshold"] = t.threshold;
        jt["left"] = t.left;
        jt["right"] = t.right;
        jt["leaf"] = t.leaf;
        jt["leaf_counts"] = t.leaf_counts;
        trees.push_back(std::move(jt));
    }

    json j;
    j["schema_version"] = kForestSchemaVersion;
    j["params"] = std::move(params);
    j["feature_names"] = forest.feature_names();
    j["class_labels"] = forest.class_labels();
    j["importances"] = forest.importances();
    j["trees"] = std::move(trees);
    return j.dump();
}

namespace {

void check_tree(const DecisionTree& t, std::size_t n_features, std::size_t n_classes) {
    const std::size_t n = t.feature.size();
    auto bad = [](const std::string& what) { throw Error(Errc::CorruptDocument, "tree: " + what); };
    if (n == 0) bad("no nodes");
    if (t.threshold.size() != n || t.left.size() != n || t.right.size() != n || t.leaf.size() != n) {
        bad("node arrays differ in length");
    }
    if (t.n_classes != n_classes || t.leaf_counts.size() % n_classes != 0) bad("class count mismatch");
    const auto leaves = static_cast<int>(t.leaf_count());
    for (std::size_t i = 0; i < n; ++i) {
        if (t.feature[i] < 0) {
            if (t.leaf[i] < 0 || t.leaf[i] >= leaves) bad("leaf index out of range");
        } else {
            if (static_cast<std::size_t>(t.feature[i]) >= n_features) bad("feature index out of range");
            // children come after their parent, which also rules out cycles
            for (int c : {t.left[i], t.right[i]}) {
                if (c <= static_cast<int>(i) || c >= static_cast<int>(n)) bad("child index out of range");
            }
        }
    }
}

}  // namespace

Forest deserialize_model(std::string_view document) {
    json j;
    try {
        j = json::parse(document);
    } catch (const json::exception& e) {
        throw Error(Errc::CorruptDocument, e.what());
    }
    if (!j.is_object() || !j.contains("schema_version")) {
        throw Error(Errc::CorruptDocument, "model has no schema_version");
    }
    if (j.at("schema_version") != kForestSchemaVersion) {
        throw Error(Errc::SchemaVersionMismatch, "model schema " + j.at("schema_version").dump() + ", expected " +
                                                     std::to_string(kForestSchemaVersion));
    }
    try {
        const auto& jp = j.at("params");
        ForestParams p;
        p.n_trees = jp.at("n_trees").get<int>();
        if (!jp.at("max_depth").is_null()) p.max_depth = jp.at("max_depth").get<int>();
        if (!jp.at("features_per_split").is_null()) p.features_per_split = jp.at("features_per_split").get<int>();
        p.min_samples_split = jp.at("min_samples_split").get<int>();
        p.bootstrap = jp.at("bootstrap").get<bool>();
        p.rng_seed = jp.at("rng_seed").get<std::uint64_t>();
        p.validate();

        auto feature_names = j.at("feature_names").get<std::vector<std::string>>();
        auto class_labels = j.at("class_labels").get<std::vector<std::string>>();
        auto importances = j.at("importances").get<std::vector<double>>();
        if (importances.size() != feature_names.size()) {
            throw Error(Errc::CorruptDocument, "importances do not match features");
        }
        if (class_labels.size() < 2) throw Error(Errc::CorruptDocument, "fewer than two classes");

        std::vector<DecisionTree> trees;
        for (const auto& jt : j.at("trees")) {
            DecisionTree t;
            t.n_classes = jt.at("n_classes").get<std::size_t>();
            t.feature = jt.at("feature").get<std::vector<int>>();
            t.threshold = jt.at("threshold").get<std::vector<double>>();
            t.left = jt.at("left").get<std::vector<int>>();
            t.right = jt.at("right").get<std::vector<int>>();
            t.leaf = jt.at("leaf").get<std::vector<int>>();
            t.leaf_counts = jt.at("leaf_counts").get<std::vector<double>>();
            check_tree(t, feature_names.size(), class_labels.size());
            trees.push_back(std::move(t));
        }
        if (trees.size() != static_cast<std::size_t>(p.n_trees)) {
            throw Error(Errc::CorruptDocument, "tree count differs from params.n_trees");
        }
        return Forest(std::move(trees), p, std::move(feature_names), std::move(class_labels),
                      std::move(importances));
    } catch (const json::exception& e) {
        throw Error(Errc::CorruptDocument, e.what());
    } catch (const Error& e) {
        if (e.code() == Errc::InvalidSpec) throw Error(Errc::CorruptDocument, e.what());
        throw;
    }
}

}  // namespace dga
