#include "dga/gibberish.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dga/error.hpp"
#include "dga/text.hpp"

namespace dga {

namespace {

constexpr std::size_t kMinTrainingChars = 10'000;

template <typename Fn>
void for_each_transition(std::string_view s, Fn&& fn) {
    int prev = -1;
    for (char c : s) {
        const int cur = MarkovGibberishModel::symbol_index(c);
        if (cur < 0) continue;
        if (prev >= 0) fn(prev, cur);
        prev = cur;
    }
}

}  // namespace

MarkovGibberishModel::MarkovGibberishModel(std::array<double, kAlphabet * kAlphabet> log_prob,
                                           double threshold)
    : log_prob_(log_prob), threshold_(threshold) {}

int MarkovGibberishModel::symbol_index(char c) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (is_lower_letter(c)) return c - 'a';
    if (c == ' ') return kAlphabet - 1;
    return -1;
}

std::optional<double> MarkovGibberishModel::average_log_prob(std::string_view s) const {
    double total = 0.0;
    std::size_t count = 0;
    for_each_transition(s, [&](int a, int b) {
        total += log_prob(a, b);
        ++count;
    });
    if (count == 0) return std::nullopt;
    return total / static_cast<double>(count);
}

double MarkovGibberishModel::score(std::string_view s) const {
    return std::exp(average_log_prob(s).value_or(threshold_));
}

double markov_score(std::string_view s, const MarkovGibberishModel& model) {
    return model.score(s);
}

MarkovGibberishModel markov_train(std::string_view good_text,
                                  std::span<const std::string> good_lines,
                                  std::span<const std::string> bad_lines) {
    if (good_text.size() < kMinTrainingChars) {
        throw Error(Errc::InsufficientText,
                    "Markov training text must have at least 10000 characters");
    }
    if (good_lines.empty() || bad_lines.empty()) {
        throw Error(Errc::EmptyCorpus, "calibration lists must be non-empty");
    }
    constexpr int k = MarkovGibberishModel::kAlphabet;
    std::array<double, k * k> counts;
    counts.fill(1.0);
    for_each_transition(good_text, [&](int a, int b) { counts[static_cast<std::size_t>(a * k + b)] += 1.0; });

    std::array<double, k * k> log_prob{};
    for (int a = 0; a < k; ++a) {
        double row = 0.0;
        for (int b = 0; b < k; ++b) row += counts[static_cast<std::size_t>(a * k + b)];
        for (int b = 0; b < k; ++b) {
            log_prob[static_cast<std::size_t>(a * k + b)] = std::log(counts[static_cast<std::size_t>(a * k + b)] / row);
        }
    }

    MarkovGibberishModel untuned(log_prob, 0.0);
    double min_good = std::numeric_limits<double>::infinity();
    double max_bad = -std::numeric_limits<double>::infinity();
    for (const auto& line : good_lines) {
        if (auto v = untuned.average_log_prob(line)) min_good = std::min(min_good, *v);
    }
    for (const auto& line : bad_lines) {
        if (auto v = untuned.average_log_prob(line)) max_bad = std::max(max_bad, *v);
    }
    if (!std::isfinite(min_good) || !std::isfinite(max_bad)) {
        throw Error(Errc::EmptyCorpus, "calibration lines contain no scorable text");
    }
    if (min_good <= max_bad) {
        throw Error(Errc::CalibrationOverlap,
                    "lowest good score " + std::to_string(min_good) +
                        " does not exceed highest gibberish score " + std::to_string(max_bad));
    }
    return MarkovGibberishModel(log_prob, (min_good + max_bad) / 2.0);
}

double band_penalty(double ratio, double lo, double hi) {
    double p = 0.0;
    if (ratio < lo) {
        p = lo > 0.0 ? (lo - ratio) / lo : 0.0;
    } else if (ratio > hi) {
        p = hi < 1.0 ? (ratio - hi) / (1.0 - hi) : 0.0;
    }
    return std::clamp(p, 0.0, 1.0);
}

HeuristicBreakdown heuristic_gibberish_breakdown(std::string_view s, const WordModel& words,
                                                 const HeuristicBands& bands) {
    std::string letters;
    letters.reserve(s.size());
    std::size_t covered = 0;
    std::size_t run_start = 0;
    auto flush_run = [&]() {
        if (letters.size() > run_start) {
            for (const auto& w : segment(std::string_view(letters).substr(run_start), words)) {
                if (static_cast<int>(w.size()) >= bands.min_word_len) covered += w.size();
            }
        }
        run_start = letters.size();
    };
    for (char c : s) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (is_lower_letter(c)) {
            letters.push_back(c);
        } else {
            flush_run();
        }
    }
    flush_run();

    HeuristicBreakdown out;
    if (letters.empty()) return out;

    bool present[26] = {};
    std::size_t unique = 0;
    std::size_t vowels = 0;
    for (char c : letters) {
        auto& p = present[c - 'a'];
        if (!p) {
            p = true;
            ++unique;
        }
        if (is_vowel(c)) ++vowels;
    }
    const double n = static_cast<double>(letters.size());
    out.unique_penalty = band_penalty(static_cast<double>(unique) / n, bands.unique_lo, bands.unique_hi);
    out.vowel_penalty = band_penalty(static_cast<double>(vowels) / n, bands.vowel_lo, bands.vowel_hi);
    out.coverage_penalty = std::clamp(1.0 - static_cast<double>(covered) / n, 0.0, 1.0);
    return out;
}

double heuristic_gibberish_score(std::string_view s, const WordModel& words,
                                 const HeuristicBands& bands) {
    return heuristic_gibberish_breakdown(s, words, bands).score();
}

}  // namespace dga
