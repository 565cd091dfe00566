#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dga {

/// Unigram word-cost table for splitting concatenated words.
///
/// Words come in descending frequency order. The word at 1-based rank r costs
/// log(r * log(N)) where N is the vocabulary size, so frequent words are
/// cheap. A single character that is not in the vocabulary costs one more
/// than the worst-ranked word; longer unknown substrings are never used.
///
/// Immutable and cheap to copy; copies share the table.
class WordModel {
public:
    WordModel() = default;

    /// Duplicates keep their first (best) rank. Throws Error{InvalidModel}
    /// when fewer than 3 distinct words remain, since log(log(N)) would not
    /// be positive.
    static WordModel from_ranked_words(std::span<const std::string> words);
    static WordModel load_wordlist(const std::string& path);

    std::optional<double> cost(std::string_view word) const;
    double oov_cost() const;
    std::size_t max_word_len() const;
    std::size_t vocab_size() const;
    const std::vector<std::string>& ranked_words() const;

    bool empty() const { return !impl_; }

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

/// Minimum-cost segmentation of s by dynamic programming over prefix
/// positions. The returned words concatenate back to s. Ties prefer the
/// shorter final word.
std::vector<std::string> segment(std::string_view s, const WordModel& model);

/// Total cost of a given split under the model's costs; +inf when a piece
/// longer than one character is out of vocabulary.
double segmentation_cost(std::span<const std::string> words, const WordModel& model);

struct SegmenterConfig {
    int w = 1;  // minimum length for a word to count as significant
};

/// Words with at least cfg.w characters, in order.
std::vector<std::string> significant_words(std::span<const std::string> words,
                                           SegmenterConfig cfg);

}  // namespace dga
