#include "dga/ngram.hpp"

#include <algorithm>

#include "dga/error.hpp"

namespace dga {

namespace {

std::uint64_t pack(std::string_view g) {
    std::uint64_t key = 0;
    for (char c : g) {
        key = (key << 8) | static_cast<unsigned char>(c);
    }
    return key;
}

std::string unpack(std::uint64_t key, int n) {
    std::string g(static_cast<std::size_t>(n), '\0');
    for (int i = n - 1; i >= 0; --i) {
        g[static_cast<std::size_t>(i)] = static_cast<char>(key & 0xff);
        key >>= 8;
    }
    return g;
}

void check_n(int n) {
    if (n < 3 || n > 5) {
        throw Error(Errc::BadGramLength, "gram length must be 3, 4 or 5, got " + std::to_string(n));
    }
}

}  // namespace

NGramModel::NGramModel(int n, std::span<const std::string> grams, std::size_t training_sld_count)
    : n_(n), training_sld_count_(training_sld_count) {
    check_n(n);
    grams_.reserve(grams.size());
    for (const auto& g : grams) {
        if (static_cast<int>(g.size()) != n) {
            throw Error(Errc::InvalidModel, "gram '" + g + "' has wrong length");
        }
        grams_.insert(pack(g));
    }
}

bool NGramModel::contains(std::string_view gram) const {
    return static_cast<int>(gram.size()) == n_ && grams_.contains(pack(gram));
}

std::vector<std::string> NGramModel::sorted_grams() const {
    std::vector<std::string> out;
    out.reserve(grams_.size());
    for (auto key : grams_) {
        out.push_back(unpack(key, n_));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> ngrams(std::string_view s, int n) {
    std::vector<std::string> out;
    if (n <= 0 || s.size() < static_cast<std::size_t>(n)) return out;
    const std::size_t count = s.size() - static_cast<std::size_t>(n) + 1;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.emplace_back(s.substr(i, static_cast<std::size_t>(n)));
    }
    return out;
}

NGramModel train_ngram_model(std::span<const std::string> slds, int n) {
    check_n(n);
    if (slds.empty()) {
        throw Error(Errc::EmptyCorpus, "cannot train an n-gram model on an empty corpus");
    }
    std::unordered_set<std::string> grams;
    for (const auto& sld : slds) {
        for (auto& g : ngrams(sld, n)) {
            grams.insert(std::move(g));
        }
    }
    std::vector<std::string> list(grams.begin(), grams.end());
    return NGramModel(n, list, slds.size());
}

}  // namespace dga
