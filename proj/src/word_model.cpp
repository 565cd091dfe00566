#include "dga/word_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "dga/error.hpp"
#include "dga/text.hpp"

namespace dga {

struct WordModel::Impl {
    std::vector<std::string> words;
    // views into `words`; Impl is never copied or moved once built
    std::unordered_map<std::string_view, double> costs;
    double oov = 0.0;
    std::size_t max_len = 0;

    Impl() = default;
    Impl(const Impl&) = delete;
    Impl& operator=(const Impl&) = delete;
};

WordModel WordModel::from_ranked_words(std::span<const std::string> words) {
    auto impl = std::make_shared<Impl>();
    std::unordered_set<std::string_view> seen;
    impl->words.reserve(words.size());
    for (const auto& w : words) {
        if (w.empty() || seen.contains(w)) continue;
        impl->words.push_back(w);
        seen.insert(w);
    }
    const std::size_t n = impl->words.size();
    if (n < 3) {
        throw Error(Errc::InvalidModel, "word model needs at least 3 distinct words");
    }
    const double log_n = std::log(static_cast<double>(n));
    impl->costs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string& w = impl->words[i];
        impl->costs.emplace(std::string_view(w), std::log(static_cast<double>(i + 1) * log_n));
        impl->max_len = std::max(impl->max_len, w.size());
    }
    impl->oov = std::log(static_cast<double>(n) * log_n) + 1.0;

    WordModel model;
    model.impl_ = std::move(impl);
    return model;
}

WordModel WordModel::load_wordlist(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::Io, "cannot open wordlist " + path);
    }
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (!t.empty()) words.push_back(to_lower_ascii(t));
    }
    return from_ranked_words(words);
}

std::optional<double> WordModel::cost(std::string_view word) const {
    if (!impl_) return std::nullopt;
    auto it = impl_->costs.find(word);
    if (it == impl_->costs.end()) return std::nullopt;
    return it->second;
}

double WordModel::oov_cost() const { return impl_ ? impl_->oov : 0.0; }
std::size_t WordModel::max_word_len() const { return impl_ ? impl_->max_len : 0; }
std::size_t WordModel::vocab_size() const { return impl_ ? impl_->words.size() : 0; }

const std::vector<std::string>& WordModel::ranked_words() const {
    static const std::vector<std::string> none;
    return impl_ ? impl_->words : none;
}

std::vector<std::string> segment(std::string_view s, const WordModel& model) {
    if (s.empty()) return {};
    if (model.empty()) {
        throw Error(Errc::ModelMissing, "segmentation needs a word model");
    }
    const std::size_t n = s.size();
    const std::size_t max_len = std::max<std::size_t>(1, model.max_word_len());
    constexpr double inf = std::numeric_limits<double>::infinity();

    std::vector<double> best(n + 1, inf);
    std::vector<std::size_t> back(n + 1, 0);
    best[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t kmax = std::min(max_len, i);
        for (std::size_t k = 1; k <= kmax; ++k) {
            const double prefix = best[i - k];
            if (prefix == inf) continue;
            double c;
            if (auto known = model.cost(s.substr(i - k, k))) {
                c = *known;
            } else if (k == 1) {
                c = model.oov_cost();
            } else {
                continue;
            }
            // strict '<' keeps the shortest final word on ties
            if (prefix + c < best[i]) {
                best[i] = prefix + c;
                back[i] = k;
            }
        }
    }

    std::vector<std::string> out;
    for (std::size_t i = n; i > 0; i -= back[i]) {
        out.emplace_back(s.substr(i - back[i], back[i]));
    }
    std::reverse(out.begin(), out.end());
    return out;
}

double segmentation_cost(std::span<const std::string> words, const WordModel& model) {
    double total = 0.0;
    for (const auto& w : words) {
        if (auto c = model.cost(w)) {
            total += *c;
        } else if (w.size() == 1) {
            total += model.oov_cost();
        } else {
            return std::numeric_limits<double>::infinity();
        }
    }
    return total;
}

std::vector<std::string> significant_words(std::span<const std::string> words,
                                           SegmenterConfig cfg) {
    std::vector<std::string> out;
    for (const auto& w : words) {
        if (static_cast<int>(w.size()) >= cfg.w) out.push_back(w);
    }
    return out;
}

}  // namespace dga
