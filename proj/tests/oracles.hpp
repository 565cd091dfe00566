#pragma once

// Brute-force reference implementations the optimized code is checked against.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace oracle {

struct Split {
    double cost = std::numeric_limits<double>::infinity();
    std::vector<std::string> words;
};

/// Minimum-cost segmentation by trying all 2^(n-1) cut patterns. Word cost is
/// log(rank * ln N) with 1-based rank over the distinct words, a lone unknown
/// character costs log(N ln N) + 1, and longer unknown pieces are not allowed.
inline Split exhaustive_segment(const std::string& s, const std::vector<std::string>& ranked) {
    std::unordered_map<std::string, double> cost;
    std::vector<std::string> distinct;
    for (const auto& w : ranked) {
        if (!cost.contains(w)) {
            cost[w] = 0.0;
            distinct.push_back(w);
        }
    }
    const double n = static_cast<double>(distinct.size());
    for (std::size_t i = 0; i < distinct.size(); ++i) {
        cost[distinct[i]] = std::log(static_cast<double>(i + 1) * std::log(n));
    }
    const double oov = std::log(n * std::log(n)) + 1.0;

    Split best;
    if (s.empty()) {
        best.cost = 0.0;
        return best;
    }
    const std::size_t cuts = s.size() - 1;
    for (std::size_t mask = 0; mask < (std::size_t{1} << cuts); ++mask) {
        std::vector<std::string> pieces;
        std::string cur(1, s[0]);
        for (std::size_t i = 1; i < s.size(); ++i) {
            if (mask & (std::size_t{1} << (i - 1))) {
                pieces.push_back(cur);
                cur.clear();
            }
            cur += s[i];
        }
        pieces.push_back(cur);
        double total = 0.0;
        bool ok = true;
        for (const auto& p : pieces) {
            auto it = cost.find(p);
            if (it != cost.end()) {
                total += it->second;
            } else if (p.size() == 1) {
                total += oov;
            } else {
                ok = false;
                break;
            }
        }
        if (ok && total < best.cost) {
            best.cost = total;
            best.words = pieces;
        }
    }
    return best;
}

/// Plain recursive CART: unit weights, every feature tried at every node,
/// Gini gain computed from its textbook definition, ties to the lowest
/// feature index and then the lowest threshold.
class Cart {
public:
    Cart(const std::vector<std::vector<double>>& x, const std::vector<int>& y, int n_classes)
        : x_(x), y_(y), k_(n_classes) {
        std::vector<std::size_t> all(x.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        root_ = build(all);
    }

    std::vector<double> predict(const std::vector<double>& v) const {
        const Node* n = root_.get();
        while (n->feature >= 0) n = v[static_cast<std::size_t>(n->feature)] <= n->threshold ? n->left.get() : n->right.get();
        return n->dist;
    }

private:
    struct Node {
        int feature = -1;
        double threshold = 0.0;
        std::unique_ptr<Node> left, right;
        std::vector<double> dist;
    };

    double gini(const std::vector<std::size_t>& rows) const {
        if (rows.empty()) return 0.0;
        std::vector<double> c(static_cast<std::size_t>(k_), 0.0);
        for (auto r : rows) c[static_cast<std::size_t>(y_[r])] += 1.0;
        double g = 1.0;
        for (double v : c) g -= (v / rows.size()) * (v / rows.size());
        return g;
    }

    std::unique_ptr<Node> build(const std::vector<std::size_t>& rows) const {
        auto node = std::make_unique<Node>();
        node->dist.assign(static_cast<std::size_t>(k_), 0.0);
        for (auto r : rows) node->dist[static_cast<std::size_t>(y_[r])] += 1.0;
        int present = 0;
        for (auto& d : node->dist) {
            if (d > 0) ++present;
            d /= static_cast<double>(rows.size());
        }
        if (present <= 1 || rows.size() < 2) return node;

        const double parent = gini(rows);
        const double n = static_cast<double>(rows.size());
        int best_f = -1;
        double best_t = 0.0;
        double best_gain = -std::numeric_limits<double>::infinity();
        for (std::size_t f = 0; f < x_[0].size(); ++f) {
            std::vector<double> vals;
            for (auto r : rows) vals.push_back(x_[r][f]);
            std::sort(vals.begin(), vals.end());
            vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
                double t = vals[i] / 2.0 + vals[i + 1] / 2.0;
                if (!(t >= vals[i] && t < vals[i + 1])) t = vals[i];
                std::vector<std::size_t> l, r;
                for (auto row : rows) (x_[row][f] <= t ? l : r).push_back(row);
                const double gain = parent - (static_cast<double>(l.size()) / n) * gini(l) -
                                    (static_cast<double>(r.size()) / n) * gini(r);
                if (best_f < 0 || gain > best_gain + 1e-12) {
                    best_gain = gain;
                    best_f = static_cast<int>(f);
                    best_t = t;
                }
            }
        }
        if (best_f < 0) return node;
        std::vector<std::size_t> l, r;
        for (auto row : rows) (x_[row][static_cast<std::size_t>(best_f)] <= best_t ? l : r).push_back(row);
        node->feature = best_f;
        node->threshold = best_t;
        node->left = build(l);
        node->right = build(r);
        return node;
    }

    const std::vector<std::vector<double>>& x_;
    const std::vector<int>& y_;
    int k_;
    std::unique_ptr<Node> root_;
};

}  // namespace oracle
