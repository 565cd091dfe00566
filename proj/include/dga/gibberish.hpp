#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dga/word_model.hpp"

namespace dga {

/// Character-bigram Markov model over [a-z] plus space.
///
/// A string scores the geometric mean of its transition probabilities. The
/// threshold (in log space) separates the calibration sets of English and
/// gibberish lines.
class MarkovGibberishModel {
public:
    static constexpr int kAlphabet = 27;
    static constexpr std::string_view kSymbols = "abcdefghijklmnopqrstuvwxyz ";

    MarkovGibberishModel() = default;
    MarkovGibberishModel(std::array<double, kAlphabet * kAlphabet> log_prob, double threshold);

    double log_prob(int from, int to) const { return log_prob_[static_cast<std::size_t>(from * kAlphabet + to)]; }
    const std::array<double, kAlphabet * kAlphabet>& log_prob_table() const { return log_prob_; }
    double threshold() const { return threshold_; }

    /// Mean log transition probability over the [a-z ] characters of s
    /// (uppercase folded, everything else dropped); nullopt with fewer than
    /// two surviving characters.
    std::optional<double> average_log_prob(std::string_view s) const;

    /// In (0,1]; exp(threshold) when there is no transition to score.
    double score(std::string_view s) const;

    /// Symbol index of c in kSymbols after case folding, or -1.
    static int symbol_index(char c);

private:
    std::array<double, kAlphabet * kAlphabet> log_prob_{};
    double threshold_ = 0.0;
};

/// Add-one smoothed bigram counts from good_text, threshold halfway between
/// the lowest good-line score and the highest bad-line score.
/// Throws Error{InsufficientText} for under 10,000 characters of text,
/// Error{EmptyCorpus} for empty calibration lists and
/// Error{CalibrationOverlap} when the calibration sets are not separated.
MarkovGibberishModel markov_train(std::string_view good_text,
                                  std::span<const std::string> good_lines,
                                  std::span<const std::string> bad_lines);

double markov_score(std::string_view s, const MarkovGibberishModel& model);

/// Acceptable bands for the rule-based gibberish scorer.
struct HeuristicBands {
    double unique_lo = 0.3;
    double unique_hi = 0.8;
    double vowel_lo = 0.25;
    double vowel_hi = 0.55;
    int min_word_len = 2;
};

struct HeuristicBreakdown {
    double unique_penalty = 1.0;
    double vowel_penalty = 1.0;
    double coverage_penalty = 1.0;
    double score() const { return (unique_penalty + vowel_penalty + coverage_penalty) / 3.0; }
};

/// Distance of `ratio` outside [lo, hi], scaled so that 0 or 1 map to 1.
double band_penalty(double ratio, double lo, double hi);

HeuristicBreakdown heuristic_gibberish_breakdown(std::string_view s, const WordModel& words,
                                                 const HeuristicBands& bands = {});

/// Rule-based gibberish score in [0,1]: 0 reads like English, 1 is noise.
/// Looks at the letters of s only; empty input scores 1.
double heuristic_gibberish_score(std::string_view s, const WordModel& words,
                                 const HeuristicBands& bands = {});

}  // namespace dga
