#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace dga {

/// Set of character n-grams (n in {3,4,5}) seen in a benign corpus. Only
/// membership is kept; the ratio features never look at frequencies.
class NGramModel {
public:
    NGramModel() = default;
    NGramModel(int n, std::span<const std::string> grams, std::size_t training_sld_count);

    int n() const { return n_; }
    std::size_t size() const { return grams_.size(); }
    std::size_t training_sld_count() const { return training_sld_count_; }

    bool contains(std::string_view gram) const;
    std::vector<std::string> sorted_grams() const;

private:
    int n_ = 0;
    std::size_t training_sld_count_ = 0;
    // grams packed one byte per character; exact for n <= 8
    std::unordered_set<std::uint64_t> grams_;
};

/// Every contiguous window of length n, in order, with multiplicity.
std::vector<std::string> ngrams(std::string_view s, int n);

/// Throws Error{BadGramLength} unless n is 3, 4 or 5 and Error{EmptyCorpus}
/// for an empty corpus.
NGramModel train_ngram_model(std::span<const std::string> slds, int n);

}  // namespace dga
